from experiments.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = ("Sample the overlap distribution, scan it for atoms and test ultrametricity. "
            "Golden Sturmian words show an atom near -0.528 of weight about 0.236; "
            "paperfolding violates ultrametricity in about 3/8 of the triples.")
    subcommand = 'overlap'
    option_map = {
        'M': 'M',
        'triples': 'triples',
        'epsilon': 'epsilon',
        'resolution': 'resolution',
        'min_weight': 'min_weight',
        'sampler': 'sampler',
        'workers': 'workers',
    }

    def add_options(self, parser):
        parser.add_argument('--M', dest='M', type=int, help="Number of replica pairs")
        parser.add_argument('--triples', dest='triples', type=int, help="Replica triples; 0 skips the test")
        parser.add_argument('--epsilon', dest='epsilon', type=float)
        parser.add_argument('--resolution', dest='resolution', type=float)
        parser.add_argument('--min-weight', dest='min_weight', type=float,
                            help="Atoms must hold more than this fraction of the pairs")
        parser.add_argument('--sampler', dest='sampler', choices=['auto', 'shift', 'phase', 'seed', 'dimer'])
        parser.add_argument('--workers', dest='workers', type=int)

    def report(self, result):
        summary = result['summary']
        distribution = summary['distribution']
        self.stdout.write(f"M={distribution['M']} N={distribution['N']} mean={distribution['mean']:.4f} "
                          f"std={distribution['std']:.4f} max atom={summary['max_atom_weight']:.4f}")
        if 'ultrametricity' in summary:
            self.stdout.write(f"ultrametricity violations: "
                              f"{summary['ultrametricity']['violation_fraction']:.4f}")
