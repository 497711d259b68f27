from rest_framework import serializers

from .types import TAIL_FORMS


class PatternEnergySerializer(serializers.Serializer):
    pattern = serializers.ListField(child=serializers.FloatField(), min_length=1)
    energy = serializers.FloatField()


class InteractionTermSerializer(serializers.Serializer):
    """
    Serializer for one interaction term: a support and its pattern energies
    """
    name = serializers.CharField(required=False, allow_blank=True)
    offsets = serializers.ListField(
        child=serializers.ListField(child=serializers.IntegerField(), min_length=1, max_length=2),
        min_length=1,
    )
    energies = PatternEnergySerializer(many=True)

    def validate(self, attrs):
        offsets = attrs['offsets']
        if len({len(o) for o in offsets}) != 1:
            raise serializers.ValidationError("All offsets of a term need the same dimension")
        if len({tuple(o) for o in offsets}) != len(offsets):
            raise serializers.ValidationError("Offsets of a term must be distinct")
        for entry in attrs['energies']:
            if len(entry['pattern']) != len(offsets):
                raise serializers.ValidationError(
                    f"Pattern {entry['pattern']} does not match the {len(offsets)}-site support"
                )
        return attrs


class PairTailSerializer(serializers.Serializer):
    form = serializers.ChoiceField(choices=TAIL_FORMS)
    amplitude = serializers.FloatField()
    exponent = serializers.FloatField(min_value=0.0)
    cutoff = serializers.IntegerField(min_value=1, required=False, allow_null=True)

    def validate_exponent(self, value):
        if value <= 0:
            raise serializers.ValidationError("Tail exponent must be positive")
        return value


class InteractionFileSerializer(serializers.Serializer):
    """
    Serializer for JSON interaction files
    """
    name = serializers.CharField(required=False, allow_blank=True)
    dimension = serializers.ChoiceField(choices=[1, 2])
    site_values = serializers.ListField(child=serializers.FloatField(), min_length=2)
    terms = InteractionTermSerializer(many=True, required=False, default=list)
    tail = PairTailSerializer(required=False, allow_null=True)

    def validate(self, attrs):
        values = attrs['site_values']
        if len(set(values)) != len(values):
            raise serializers.ValidationError("site_values must be distinct")
        if not attrs.get('terms') and not attrs.get('tail'):
            raise serializers.ValidationError("An interaction needs at least one term or a tail")
        if attrs.get('tail') and attrs['dimension'] != 1:
            raise serializers.ValidationError("Pair tails are supported in dimension 1 only")
        for term in attrs.get('terms', []):
            if len(term['offsets'][0]) != attrs['dimension']:
                raise serializers.ValidationError(
                    f"Term offsets {term['offsets']} do not match dimension {attrs['dimension']}"
                )
            for entry in term['energies']:
                outside = [v for v in entry['pattern'] if v not in values]
                if outside:
                    raise serializers.ValidationError(f"Pattern values {outside} are not site values")
        return attrs
