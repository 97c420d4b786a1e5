"""Django command to sweep one of the study grids
"""
from experiment import cli
from experiment.studies import STUDIES, run_study, study_cells


class Command(cli.ExperimentCommand):
    """Run seeded trials over every cell of a study grid"""
    help = 'Sweep noise level, data length or period'

    def add_arguments(self, parser):
        cli.add_common_arguments(parser)
        parser.add_argument('--study', choices=STUDIES, required=True,
                            help='Which variable to sweep')

    def handle(self, *args, **options):
        """Entry point for command"""
        config = cli.load_config(
            options['config'], options['seed'], options['trials'],
            options['out'],
        )
        for cell in study_cells(options['study'], config):
            warning = cli.sufficiency_warning(cell)
            if warning:
                self.stderr.write(self.style.WARNING(warning))

        self.stdout.write(
            f'Running the {options["study"]} study with {config.trials} '
            f'trial(s) per cell, seed {config.seed}...'
        )
        result = run_study(options['study'], config,
                           workers=options['workers'])
        cli.finish(self, result, options)
