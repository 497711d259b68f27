from experiments.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Metropolis runs of a lattice Gibbs measure with pair correlations"
    subcommand = 'gibbs'
    uses_system = False
    option_map = {
        'interaction': 'interaction',
        'shape': 'shape',
        'beta': 'beta',
        'boundary': 'boundary',
        'frame_value': 'frame_value',
        'sweeps': 'sweeps',
        'burn_in': 'burn_in',
        'distances': 'distances',
        'order': 'order',
        'mixture': 'mixture',
        'batches': 'batches',
    }

    def add_options(self, parser):
        parser.add_argument('--interaction', dest='interaction',
                            help="ising-1d, ising-2d or a JSON interaction file")
        parser.add_argument('--coupling', dest='coupling', type=float, help="Ising coupling J")
        parser.add_argument('--field', dest='field', type=float, help="Ising field h")
        parser.add_argument('--shape', dest='shape', type=int, nargs='+', help="Box sides")
        parser.add_argument('--beta', dest='beta', type=float)
        parser.add_argument('--boundary', dest='boundary', choices=['frame', 'free', 'periodic'])
        parser.add_argument('--frame-value', dest='frame_value', type=float,
                            help="Constant site value on the boundary frame")
        parser.add_argument('--sweeps', dest='sweeps', type=int)
        parser.add_argument('--burn-in', dest='burn_in', type=int)
        parser.add_argument('--distances', dest='distances', type=int, nargs='+')
        parser.add_argument('--order', dest='order', choices=['raster', 'random'])
        parser.add_argument('--mixture', dest='mixture', action='store_true', default=None,
                            help="Average + and - frame runs")
        parser.add_argument('--batches', dest='batches', type=int)

    def build_config(self, options):
        config = super().build_config(options)
        params = dict(config.get('params', {}))
        if options.get('coupling') is not None:
            params['J'] = options['coupling']
        if options.get('field') is not None:
            params['h'] = options['field']
        if params:
            config['params'] = params
        return config

    def report(self, result):
        summary = result['summary']
        self.stdout.write(f"beta={summary['beta']} boundary={summary['boundary']}")
        rows = summary.get('mixture') or []
        for row in rows:
            self.stdout.write(f"mixture f({row['distance']}) = {row['correlation']['value']:.4f} "
                              f"+- {row['correlation']['error']:.4f}, connected {row['connected']:.4f}")
        if 'magnetization' in summary:
            m = summary['magnetization']
            self.stdout.write(f"magnetization {m['value']:.4f} +- {m['error']:.4f}")
