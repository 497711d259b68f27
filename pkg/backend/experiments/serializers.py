from django.conf import settings
from rest_framework import serializers

from correlation.observables import OBSERVABLES
from correlation.services import METHODS
from gibbs.hamiltonian import BOUNDARIES
from gibbs.sampler import ORDERS
from sequences.factors import BUILTIN_BLOCK_MAPS
from sequences.systems import SYSTEMS

SUBCOMMANDS = ('generate', 'autocorr', 'diffract', 'eigenvalue', 'overlap', 'gibbs', 'complexity')
SAMPLERS = ('auto', 'shift', 'phase', 'seed', 'dimer')
PROBES = ('detect', 'dyadic')
BLOCK_MAPS = tuple(sorted(BUILTIN_BLOCK_MAPS)) + ('identity', 'spin-sign')
MANIFEST_SCHEMA_VERSION = '1'

# Defaults reproduce the acceptance runs when only the system is given
SUBCOMMAND_DEFAULTS = {
    'generate': {'N': 1024},
    'autocorr': {'N': 2 ** 20, 'max_lag': 64, 'method': 'auto'},
    'diffract': {'N': 2 ** 20, 'top_m': 8, 'probe': 'detect', 'probe_level': 12},
    'eigenvalue': {'theta': 0.5, 'N_list': [2 ** 14, 2 ** 17, 2 ** 20], 'observable': 'spin',
                   'threshold': 0.1},
    'overlap': {'M': 10 ** 4, 'N': 10 ** 5, 'triples': 1000, 'resolution': 0.01, 'min_weight': 0.05,
                'sampler': 'auto'},
    'gibbs': {'interaction': 'ising-1d', 'shape': [32], 'beta': 0.5, 'boundary': 'free',
              'sweeps': 10 ** 4, 'burn_in': 1000, 'distances': [1, 2, 3, 4, 5], 'order': 'raster',
              'mixture': False, 'batches': 50},
    'complexity': {'N': 10 ** 6, 'n_max': 16},
}

# Settings-derived values are not part of a run's identity
RUNTIME_FIELDS = ('output_dir', 'workers')


class ExperimentConfigSerializer(serializers.Serializer):
    """
    Serializer for batch run configurations

    Unset fields take the subcommand's defaults, so validated data always
    validates again to itself.
    """
    subcommand = serializers.ChoiceField(choices=SUBCOMMANDS)
    system = serializers.CharField(required=False, allow_null=True, default=None)
    params = serializers.DictField(required=False, default=dict)
    seed = serializers.IntegerField(min_value=0, required=False, allow_null=True, default=None)
    output_dir = serializers.CharField(required=False, allow_null=True, default=None)
    workers = serializers.IntegerField(min_value=1, required=False, allow_null=True, default=None)

    # Windows
    N = serializers.IntegerField(min_value=1, required=False, allow_null=True, default=None)
    offset = serializers.IntegerField(required=False, default=0)
    block_map = serializers.CharField(required=False, allow_null=True, default=None)

    # autocorr
    max_lag = serializers.IntegerField(min_value=0, required=False, allow_null=True, default=None)
    method = serializers.ChoiceField(choices=METHODS, required=False, allow_null=True, default=None)

    # diffract / eigenvalue
    grid = serializers.IntegerField(min_value=2, required=False, allow_null=True, default=None)
    segment_length = serializers.IntegerField(min_value=2, required=False, allow_null=True, default=None)
    N_list = serializers.ListField(child=serializers.IntegerField(min_value=1), required=False,
                                   allow_null=True, default=None)
    top_m = serializers.IntegerField(min_value=1, required=False, allow_null=True, default=None)
    probe = serializers.ChoiceField(choices=PROBES, required=False, allow_null=True, default=None)
    probe_level = serializers.IntegerField(min_value=1, max_value=24, required=False, allow_null=True,
                                           default=None)
    theta = serializers.FloatField(min_value=0.0, required=False, allow_null=True, default=None)
    observable = serializers.CharField(required=False, allow_null=True, default=None)
    symbol = serializers.CharField(required=False, allow_null=True, default=None)
    threshold = serializers.FloatField(min_value=0.0, required=False, allow_null=True, default=None)

    # overlap
    M = serializers.IntegerField(min_value=1, required=False, allow_null=True, default=None)
    triples = serializers.IntegerField(min_value=0, required=False, allow_null=True, default=None)
    epsilon = serializers.FloatField(min_value=0.0, required=False, allow_null=True, default=None)
    resolution = serializers.FloatField(min_value=0.0, required=False, allow_null=True, default=None)
    min_weight = serializers.FloatField(min_value=0.0, max_value=1.0, required=False, allow_null=True,
                                        default=None)
    sampler = serializers.ChoiceField(choices=SAMPLERS, required=False, allow_null=True, default=None)

    # gibbs
    interaction = serializers.CharField(required=False, allow_null=True, default=None)
    shape = serializers.ListField(child=serializers.IntegerField(min_value=1), min_length=1, max_length=2,
                                  required=False, allow_null=True, default=None)
    beta = serializers.FloatField(min_value=0.0, required=False, allow_null=True, default=None)
    boundary = serializers.ChoiceField(choices=BOUNDARIES, required=False, allow_null=True, default=None)
    frame_value = serializers.FloatField(required=False, allow_null=True, default=None)
    sweeps = serializers.IntegerField(min_value=1, required=False, allow_null=True, default=None)
    burn_in = serializers.IntegerField(min_value=0, required=False, allow_null=True, default=None)
    distances = serializers.ListField(child=serializers.IntegerField(min_value=1), required=False,
                                      allow_null=True, default=None)
    order = serializers.ChoiceField(choices=ORDERS, required=False, allow_null=True, default=None)
    mixture = serializers.BooleanField(required=False, allow_null=True, default=None)
    batches = serializers.IntegerField(min_value=2, required=False, allow_null=True, default=None)

    # complexity
    n_max = serializers.IntegerField(min_value=1, required=False, allow_null=True, default=None)

    def validate_system(self, value):
        if value is not None and value not in SYSTEMS:
            raise serializers.ValidationError(
                f"Unknown system {value!r}; valid options: {', '.join(sorted(SYSTEMS))}"
            )
        return value

    def validate_observable(self, value):
        if value is not None and value not in OBSERVABLES:
            raise serializers.ValidationError(
                f"Unknown observable {value!r}; valid options: {', '.join(OBSERVABLES)}"
            )
        return value

    def validate_block_map(self, value):
        if value is not None and value not in BLOCK_MAPS:
            raise serializers.ValidationError(
                f"Unknown block map {value!r}; valid options: {', '.join(BLOCK_MAPS)}"
            )
        return value

    def validate(self, attrs):
        subcommand = attrs['subcommand']
        for key, value in SUBCOMMAND_DEFAULTS[subcommand].items():
            if attrs.get(key) is None:
                attrs[key] = list(value) if isinstance(value, list) else value

        if subcommand != 'gibbs' and attrs.get('system') is None:
            raise serializers.ValidationError(
                {'system': f"{subcommand} needs a system; valid options: {', '.join(sorted(SYSTEMS))}"}
            )
        if subcommand == 'diffract':
            if attrs.get('grid') is None:
                attrs['grid'] = attrs['N']
            if attrs.get('N_list') is None:
                attrs['N_list'] = sorted({max(attrs['N'] // 64, 1), max(attrs['N'] // 8, 1), attrs['N']})
        if subcommand in ('diffract', 'eigenvalue') and max(attrs['N_list']) > (attrs.get('N') or 0):
            attrs['N'] = max(attrs['N_list'])
        if subcommand == 'eigenvalue' and not attrs['theta'] < 1.0:
            raise serializers.ValidationError({'theta': "theta must lie in [0, 1)"})
        if subcommand == 'overlap' and attrs.get('epsilon') is None:
            attrs['epsilon'] = settings.APERIODIC_ULTRAMETRIC_EPSILON
        if subcommand == 'gibbs' and attrs['boundary'] == 'frame' and attrs.get('frame_value') is None \
                and not attrs['mixture']:
            raise serializers.ValidationError({'frame_value': "A frame boundary needs frame_value"})

        if attrs.get('seed') is None:
            attrs['seed'] = settings.APERIODIC_MASTER_SEED
        if attrs.get('seed') is None and self._needs_seed(attrs):
            raise serializers.ValidationError(
                {'seed': f"{subcommand} on {attrs.get('system') or attrs.get('interaction')} is random; "
                         f"refusing to run without a seed (pass --seed or set APERIODIC_MASTER_SEED)"}
            )
        if attrs.get('output_dir') is None:
            attrs['output_dir'] = str(settings.APERIODIC_OUTPUT_DIR)
        return attrs

    @staticmethod
    def _needs_seed(attrs) -> bool:
        if attrs['subcommand'] in ('overlap', 'gibbs'):
            return True
        system = attrs.get('system')
        return system is not None and SYSTEMS[system].needs_seed


def identity_config(config):
    """The part of a validated config that determines the outputs"""
    return {k: v for k, v in config.items() if k not in RUNTIME_FIELDS}


class OutputFileSerializer(serializers.Serializer):
    path = serializers.CharField()
    kind = serializers.ChoiceField(choices=['csv', 'json'])
    sha256 = serializers.RegexField(r'^[0-9a-f]{64}$')
    rows = serializers.IntegerField(min_value=0, required=False, allow_null=True)


class ManifestSerializer(serializers.Serializer):
    """
    Serializer for run manifests; schema_version tracks the layout
    """
    schema_version = serializers.ChoiceField(choices=[MANIFEST_SCHEMA_VERSION])
    toolkit_version = serializers.CharField()
    run_id = serializers.UUIDField()
    subcommand = serializers.ChoiceField(choices=SUBCOMMANDS)
    system = serializers.CharField(allow_blank=True)
    seed = serializers.IntegerField(allow_null=True)
    config = serializers.DictField()
    config_hash = serializers.RegexField(r'^[0-9a-f]{64}$')
    outputs = OutputFileSerializer(many=True)
    summary = serializers.DictField(required=False, default=dict)
    created_at = serializers.DateTimeField()
    processing_time = serializers.FloatField(min_value=0.0)

    def validate_outputs(self, value):
        paths = [entry['path'] for entry in value]
        if len(set(paths)) != len(paths):
            raise serializers.ValidationError("Each output file may appear only once")
        if not paths:
            raise serializers.ValidationError("A manifest must list at least one output")
        return value

    def validate_config(self, value):
        config = ExperimentConfigSerializer(data=value)
        if not config.is_valid():
            raise serializers.ValidationError(f"Recorded config is invalid: {config.errors}")
        return value
