from experiments.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Empirical autocorrelation gamma_N(n) for n = 0..max_lag"
    subcommand = 'autocorr'
    option_map = {'max_lag': 'max_lag', 'method': 'method'}

    def add_options(self, parser):
        parser.add_argument('--max-lag', dest='max_lag', type=int)
        parser.add_argument('--method', dest='method', choices=['auto', 'direct', 'fft'])
