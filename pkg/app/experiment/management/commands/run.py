"""Django command to run the identification pipeline on one config
"""
from experiment import cli
from experiment.studies import run_experiment


class Command(cli.ExperimentCommand):
    """Run seeded trials of a single configuration"""
    help = 'Identify a polytope model for every trial of a config'

    def add_arguments(self, parser):
        cli.add_common_arguments(parser)

    def handle(self, *args, **options):
        """Entry point for command"""
        config = cli.load_config(
            options['config'], options['seed'], options['trials'],
            options['out'],
        )
        warning = cli.sufficiency_warning(config)
        if warning:
            self.stderr.write(self.style.WARNING(warning))

        self.stdout.write(
            f'Running {config.trials} trial(s) with seed {config.seed}...'
        )
        result = run_experiment(config, workers=options['workers'])
        cli.finish(self, result, options)

