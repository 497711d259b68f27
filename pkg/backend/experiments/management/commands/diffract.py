from experiments.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Periodogram on a k-grid plus a multi-N Bragg scan"
    subcommand = 'diffract'
    option_map = {
        'grid': 'grid',
        'segment_length': 'segment_length',
        'N_list': 'N_list',
        'top_m': 'top_m',
        'probe': 'probe',
        'probe_level': 'probe_level',
    }

    def add_options(self, parser):
        parser.add_argument('--grid', dest='grid', type=int, help="Number of k points on [0, 2pi)")
        parser.add_argument('--segment-length', dest='segment_length', type=int,
                            help="Average periodograms over disjoint segments of this length")
        parser.add_argument('--N-list', dest='N_list', type=int, nargs='+', help="Sizes for the scaling fit")
        parser.add_argument('--top-m', dest='top_m', type=int, help="Candidate peaks to scan")
        parser.add_argument('--probe', dest='probe', choices=['detect', 'dyadic'])
        parser.add_argument('--probe-level', dest='probe_level', type=int,
                            help="Dyadic probes k = 2 pi j / 2^level")

    def report(self, result):
        summary = result['summary']
        self.stdout.write(f"N={summary['N']} grid={summary['grid_size']} "
                          f"atoms off k=0: {summary['atoms_off_zero']}")
