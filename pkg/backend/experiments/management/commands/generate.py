from experiments.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Generate a window of a named system and write it as CSV with its provenance"
    subcommand = 'generate'

    def report(self, result):
        summary = result['summary']
        if 'word' in summary:
            self.stdout.write(summary['word'])
        else:
            self.stdout.write(f"N={summary['N']} offset={summary['offset']}")
