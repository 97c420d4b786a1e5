"""Helpers shared by the run, study and report commands."""
import json
import sys

from django.conf import settings
from django.core.management.base import (
    BaseCommand, CommandError, CommandParser,
)

from experiment.persistence import save_result
from experiment.reports import emit_report
from experiment.serializers import ExperimentConfigSerializer

# Exit codes
CONFIG_ERROR = 1
ALL_TRIALS_FAILED = 2


class ConfigErrorParser(CommandParser):
    """Reports bad flags with the config exit code instead of 2"""

    def error(self, message):
        if self.called_from_command_line:
            self.print_usage(sys.stderr)
            self.exit(CONFIG_ERROR, f'{self.prog}: error: {message}\n')
        raise CommandError(f'Error: {message}', returncode=CONFIG_ERROR)


class ExperimentCommand(BaseCommand):
    """Base for the experiment commands"""

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        # BaseCommand always builds a CommandParser
        parser.__class__ = ConfigErrorParser
        return parser


def add_common_arguments(parser):
    """Flags understood by both run and study"""
    parser.add_argument('--config', required=True,
                        help='Path to the JSON experiment config')
    parser.add_argument('--seed', type=int,
                        help='Master seed, overrides the config')
    parser.add_argument('--trials', type=int,
                        help='Number of trials, overrides the config')
    parser.add_argument('--out', help='Output directory for reports')
    parser.add_argument('--format', choices=['csv', 'text'], default='csv',
                        dest='fmt', help='Report format')
    parser.add_argument('--no-save', action='store_true',
                        help='Do not store the trials in the database')
    parser.add_argument('--timing', action='store_true',
                        help='Record wall time per trial in the reports')
    parser.add_argument('--workers', type=int,
                        default=settings.SYSID_WORKERS,
                        help='Worker processes used to run trials')


def load_config(path, seed=None, trials=None, out=None):
    """Read and validate a config file, applying command line overrides.
    Any problem is raised as a CommandError with the config exit code.
    """
    try:
        with open(path) as handle:
            data = json.load(handle)
    except OSError as exc:
        raise CommandError(
            f'Cannot read config {path}: {exc}', returncode=CONFIG_ERROR
        )
    except json.JSONDecodeError as exc:
        raise CommandError(
            f'Config {path} is not valid JSON: {exc}',
            returncode=CONFIG_ERROR,
        )
    if not isinstance(data, dict):
        raise CommandError(
            f'Config {path} must be a JSON object', returncode=CONFIG_ERROR
        )

    # Command line flags win over the file
    if seed is not None:
        data['seed'] = seed
    if trials is not None:
        data['trials'] = trials
    if out is not None:
        data['output_dir'] = out

    serializer = ExperimentConfigSerializer(data=data)
    if not serializer.is_valid():
        raise CommandError(
            f'Invalid config {path}: {json.dumps(serializer.errors)}',
            returncode=CONFIG_ERROR,
        )
    return serializer.validated_data


def output_dir(config):
    return config.output_dir or settings.RESULTS_DIR


def sufficiency_warning(config):
    """Message when the record is short for reliable vertices, else None"""
    recommended = config.recommended_length()
    if config.n_data >= recommended:
        return None
    return (
        f'N_data={config.n_data} is below the recommended '
        f'10 (N n)^2 = {recommended} samples for N={config.period}, '
        f'n={config.order}; expect large vertex errors.'
    )


def finish(command, result, options):
    """Write reports, save to the database and pick the exit code"""
    try:
        paths = emit_report(
            result, output_dir(result.config), options['fmt'],
            timing=options['timing'],
        )
    except OSError as exc:
        raise CommandError(str(exc))
    for path in paths:
        command.stdout.write(f'Wrote {path}')
    if not options['no_save']:
        experiment = save_result(result)
        command.stdout.write(f'Saved as experiment {experiment.id}')

    if result.all_failed:
        raise CommandError('All trials failed', returncode=ALL_TRIALS_FAILED)
    done = len(result.reports) - result.failed
    command.stdout.write(command.style.SUCCESS(
        f'{done} of {len(result.reports)} trial(s) succeeded'
    ))
