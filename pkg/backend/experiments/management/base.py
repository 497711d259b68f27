"""
Shared option handling for the experiment management commands
"""

import json

from django.core.management.base import BaseCommand, CommandError
from rest_framework import serializers

from experiments.services import run


def _format_errors(detail) -> str:
    if isinstance(detail, dict):
        return '; '.join(f"{key}: {_format_errors(value)}" for key, value in detail.items())
    if isinstance(detail, list):
        return '; '.join(_format_errors(item) for item in detail)
    return str(detail)


class ExperimentCommand(BaseCommand):
    """
    Base class: subclasses set `subcommand`, add their flags in add_options and
    map parsed options onto config keys in `option_map`
    """
    subcommand = None
    uses_system = True
    option_map = {}

    def add_arguments(self, parser):
        if self.uses_system:
            parser.add_argument('--system', dest='system', help="Named system, e.g. thue-morse")
            parser.add_argument('--N', dest='N', type=int, help="Window length")
            parser.add_argument('--offset', dest='offset', type=int, help="First site of the window")
            parser.add_argument('--alpha', dest='alpha', help="Sturmian rotation number: golden, p/q or a float")
            parser.add_argument('--phase', dest='phase', help="Sturmian phase beta in [0, 1)")
            parser.add_argument('--exact', dest='exact', action='store_true', default=None,
                                help="Exact integer arithmetic for quadratic-irrational alpha")
            parser.add_argument('--parity', dest='parity', choices=['even', 'odd'], help="Dimer parity")
            parser.add_argument('--pattern', dest='pattern', help="Pattern of the periodic system")
            parser.add_argument('--block-map', dest='block_map', help="Sliding-block map applied to the window")
        parser.add_argument('--seed', dest='seed', type=int, help="Master seed (default APERIODIC_MASTER_SEED)")
        parser.add_argument('--output-dir', dest='output_dir', help="Output directory (default APERIODIC_OUTPUT_DIR)")
        parser.add_argument('--params', dest='params_json', help="Extra system parameters as a JSON object")
        self.add_options(parser)

    def add_options(self, parser):
        """Subcommand-specific flags"""

    def build_config(self, options):
        config = {}
        params = {}
        if options.get('params_json'):
            try:
                params.update(json.loads(options['params_json']))
            except json.JSONDecodeError as e:
                raise CommandError(f"--params is not valid JSON: {e}", returncode=2)
        for flag, key in (('alpha', 'alpha'), ('phase', 'beta'), ('exact', 'exact'),
                          ('parity', 'parity'), ('pattern', 'pattern')):
            if options.get(flag) is not None:
                params[key] = options[flag]
        if params:
            config['params'] = params

        keys = ['system', 'N', 'offset', 'block_map', 'seed', 'output_dir']
        for key in keys:
            if options.get(key) is not None:
                config[key] = options[key]
        for option, key in self.option_map.items():
            if options.get(option) is not None:
                config[key] = options[option]
        return config

    def handle(self, *args, **options):
        config = self.build_config(options)
        try:
            result = run(self.subcommand, config)
        except serializers.ValidationError as e:
            raise CommandError(f"Invalid {self.subcommand} configuration: {_format_errors(e.detail)}",
                               returncode=2)

        if not result['success']:
            raise CommandError(f"{self.subcommand} failed: {result['error']}")

        self.report(result)
        self.stdout.write(self.style.SUCCESS(f"Wrote {len(result['outputs'])} outputs to {result['output_dir']}"))
        self.stdout.write(f"Manifest: {result['manifest_path']}")

    def report(self, result):
        """Print the run summary"""
        self.stdout.write(json.dumps(result['summary'], sort_keys=True, default=str))
