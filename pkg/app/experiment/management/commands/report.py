"""Django command to re-aggregate saved trials
"""
import json
from pathlib import Path

from django.core.management.base import CommandError

from core.models import Experiment
from experiment import cli
from experiment.persistence import load_reports, output_dim
from experiment.reports import json_safe, read_trials, trials_frame
from experiment.studies import summarize


class Command(cli.ExperimentCommand):
    """Print (and optionally write) the per-cell summary of saved trials"""
    help = 'Summarize trials from a CSV file or a saved experiment'

    def add_arguments(self, parser):
        # Exactly one source of trials is needed
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument('--input', help='Per-trial CSV written by run')
        source.add_argument('--experiment', type=int,
                            help='Id of a saved experiment')
        parser.add_argument('--out', help='Directory to write the summary to')
        parser.add_argument('--format', choices=['csv', 'text'], default='csv',
                            dest='fmt', help='Summary format')

    def _frame(self, options):
        if options['input']:
            try:
                frame = read_trials(options['input'])
            except OSError as exc:
                raise CommandError(str(exc), returncode=cli.CONFIG_ERROR)
            return frame, Path(options['input']).stem

        try:
            experiment = Experiment.objects.get(id=options['experiment'])
        except Experiment.DoesNotExist:
            raise CommandError(
                f'No experiment with id {options["experiment"]}',
                returncode=cli.CONFIG_ERROR,
            )
        reports = load_reports(experiment)
        if not reports:
            raise CommandError(
                f'Experiment {experiment.id} has no trials',
                returncode=cli.CONFIG_ERROR,
            )
        frame = trials_frame(reports, output_dim(experiment))
        return frame, f'experiment_{experiment.id}'

    def handle(self, *args, **options):
        """Entry point for command"""
        frame, name = self._frame(options)
        try:
            summary = summarize(frame)
        except (KeyError, ValueError) as exc:
            raise CommandError(f'Cannot summarize trials: {exc}',
                               returncode=cli.CONFIG_ERROR)
        self.stdout.write(summary.to_string(index=False))

        if options['out']:
            out = Path(options['out'])
            out.mkdir(parents=True, exist_ok=True)
            if options['fmt'] == 'csv':
                path = out / f'{name}_summary.csv'
                summary.to_csv(path, index=False, lineterminator='\n')
            else:
                path = out / f'{name}_summary.json'
                records = json_safe(summary.to_dict(orient='records'))
                path.write_text(json.dumps(records, indent=2) + '\n')
            self.stdout.write(f'Wrote {path}')

        if (summary['failed'] == summary['trials']).all():
            raise CommandError('All trials failed',
                               returncode=cli.ALL_TRIALS_FAILED)
        self.stdout.write(self.style.SUCCESS('Summary complete'))
