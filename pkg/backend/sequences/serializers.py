from rest_framework import serializers

from .systems import SYSTEMS


class AlphabetSerializer(serializers.Serializer):
    """
    Serializer for a single-site alphabet and its spin encoding
    """
    symbols = serializers.ListField(child=serializers.CharField(), min_length=2)
    spin_map = serializers.DictField(child=serializers.FloatField(), required=False, allow_null=True)

    def validate(self, attrs):
        symbols = attrs['symbols']
        if len(set(symbols)) != len(symbols):
            raise serializers.ValidationError("Alphabet symbols must be distinct")
        spin_map = attrs.get('spin_map')
        if spin_map is not None and set(spin_map) != set(symbols):
            raise serializers.ValidationError("spin_map must cover exactly the alphabet symbols")
        return attrs


class ProvenanceSerializer(serializers.Serializer):
    """
    Serializer for window provenance records
    """
    GENERATORS = sorted(SYSTEMS) + ['substitution', 'factor']

    generator = serializers.ChoiceField(choices=GENERATORS)
    parameters = serializers.DictField(required=False, default=dict)
    seed = serializers.IntegerField(min_value=0, required=False, allow_null=True)
    offset = serializers.IntegerField(default=0)
    length = serializers.IntegerField(min_value=1)

    def validate(self, attrs):
        generator = attrs['generator']
        if generator in SYSTEMS and SYSTEMS[generator].needs_seed and attrs.get('seed') is None:
            raise serializers.ValidationError(f"Provenance for {generator!r} must record a seed")
        if generator == 'substitution' and 'system' not in attrs.get('parameters', {}):
            raise serializers.ValidationError("Substitution provenance must carry the rule system")
        if generator == 'factor':
            parameters = attrs.get('parameters', {})
            if 'source' not in parameters or 'block_map' not in parameters:
                raise serializers.ValidationError("Factor provenance needs a source and a block_map")
        return attrs


class WindowManifestSerializer(serializers.Serializer):
    version = serializers.CharField()
    N = serializers.IntegerField(min_value=1)
    offset = serializers.IntegerField()
    alphabet = AlphabetSerializer()
    provenance = ProvenanceSerializer(allow_null=True)
