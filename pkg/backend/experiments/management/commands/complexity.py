from experiments.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Word complexity p(n) and the entropy proxy"
    subcommand = 'complexity'
    option_map = {'n_max': 'n_max'}

    def add_options(self, parser):
        parser.add_argument('--n-max', dest='n_max', type=int)

    def report(self, result):
        summary = result['summary']
        self.stdout.write(f"trend={summary['trend']} proxy={summary['final_proxy']:.4f}")
