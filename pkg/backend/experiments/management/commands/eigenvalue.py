from experiments.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Twisted Birkhoff averages of an observable at theta across N"
    subcommand = 'eigenvalue'
    option_map = {
        'theta': 'theta',
        'N_list': 'N_list',
        'observable': 'observable',
        'symbol': 'symbol',
        'threshold': 'threshold',
    }

    def add_options(self, parser):
        parser.add_argument('--theta', dest='theta', type=float)
        parser.add_argument('--N-list', dest='N_list', type=int, nargs='+')
        parser.add_argument('--observable', dest='observable',
                            help="constant, indicator, spin or dimer-start")
        parser.add_argument('--symbol', dest='symbol', help="Symbol of the indicator observable")
        parser.add_argument('--threshold', dest='threshold', type=float)

    def report(self, result):
        summary = result['summary']
        moduli = ', '.join(f"{m:.4f}" for m in summary['moduli'])
        self.stdout.write(f"theta={summary['theta']} moduli [{moduli}] certified={summary['certified']}")
