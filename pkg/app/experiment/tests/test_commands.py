"""
Test the run, study and report management commands
"""
import json
import tempfile
from importlib import import_module
from io import StringIO
from pathlib import Path
from unittest.mock import patch

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import TestCase

from core.models import Experiment, TrialRecord
from experiment import cli
from sysid.exceptions import DegenerateDataError
from sysid.subspace import cycled_identify


def fail_first_call(func):
    """Wrap func so that only its first call raises"""
    calls = []

    def wrapper(*args, **kwargs):
        calls.append(args)
        if len(calls) == 1:
            raise DegenerateDataError('no excitation')
        return func(*args, **kwargs)
    return wrapper


def small_config(**params):
    """A config that runs in well under a second per trial"""
    config = {
        'plant': 'benchmark',
        'period': 2,
        'n_data': 400,
        'n_val': 100,
        'observation_noise': {'std_dev': 0.05},
        'pso': {'population': 5, 'max_iterations': 5},
        'trials': 2,
        'seed': 17,
    }
    config.update(params)
    return config


class CommandTestCase(TestCase):
    """Temporary directory with a config file in it"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)
        self.out = self.dir / 'results'
        self.config_path = self.write_config(small_config())

    def tearDown(self):
        self.tmp.cleanup()

    def write_config(self, data, name='config.json'):
        path = self.dir / name
        path.write_text(json.dumps(data))
        return str(path)

    def call(self, *args):
        """Run a command, returning its stdout and stderr"""
        stdout, stderr = StringIO(), StringIO()
        call_command(*args, stdout=stdout, stderr=stderr)
        return stdout.getvalue(), stderr.getvalue()


class RunCommandTests(CommandTestCase):
    """Test the run command"""

    def test_run_writes_reports_and_saves(self):
        """Test a run writes both CSV files and stores the trials"""
        stdout, _ = self.call('run', '--config', self.config_path,
                              '--out', str(self.out))

        self.assertTrue((self.out / 'run.csv').exists())
        self.assertTrue((self.out / 'run_summary.csv').exists())
        self.assertIn('2 of 2 trial(s) succeeded', stdout)
        experiment = Experiment.objects.get()
        self.assertEqual(experiment.kind, 'run')
        self.assertEqual(experiment.seed, 17)
        self.assertEqual(experiment.trials.count(), 2)
        self.assertEqual(experiment.config['period'], 2)

    def test_overrides(self):
        """Test --seed and --trials win over the file"""
        self.call('run', '--config', self.config_path, '--out',
                  str(self.out), '--seed', '99', '--trials', '1')

        experiment = Experiment.objects.get()
        self.assertEqual(experiment.seed, 99)
        self.assertEqual(experiment.trials.count(), 1)

    def test_no_save(self):
        """Test --no-save leaves the database alone"""
        self.call('run', '--config', self.config_path, '--out',
                  str(self.out), '--no-save')

        self.assertFalse(Experiment.objects.exists())
        self.assertTrue((self.out / 'run.csv').exists())

    def test_text_format(self):
        self.call('run', '--config', self.config_path, '--out',
                  str(self.out), '--format', 'text', '--no-save')

        document = json.loads((self.out / 'run.json').read_text())
        self.assertEqual(len(document['trials']), 2)

    def test_timing(self):
        """Test --timing fills in the wall time column"""
        self.call('run', '--config', self.config_path, '--out',
                  str(self.out), '--timing', '--no-save')

        last = (self.out / 'run.csv').read_text().splitlines()[1]
        self.assertFalse(last.endswith(','))

    def test_short_record_warning(self):
        """Test a record below 10 (N n)^2 samples prints a warning"""
        path = self.write_config(small_config(n_data=200, trials=1))

        _, stderr = self.call('run', '--config', path, '--out',
                              str(self.out), '--no-save')

        self.assertIn('recommended', stderr)

    def test_missing_config_file(self):
        """Test an unreadable config exits with the config error code"""
        with self.assertRaises(CommandError) as context:
            self.call('run', '--config', str(self.dir / 'missing.json'))

        self.assertEqual(context.exception.returncode, cli.CONFIG_ERROR)

    def test_invalid_json(self):
        path = self.dir / 'broken.json'
        path.write_text('{"seed": ')

        with self.assertRaises(CommandError) as context:
            self.call('run', '--config', str(path))

        self.assertEqual(context.exception.returncode, cli.CONFIG_ERROR)

    def test_invalid_config(self):
        """Test a config that fails validation exits with code 1"""
        path = self.write_config(small_config(n_data=20))

        with self.assertRaises(CommandError) as context:
            self.call('run', '--config', path)

        self.assertEqual(context.exception.returncode, cli.CONFIG_ERROR)
        self.assertIn('n_data', str(context.exception))
        self.assertFalse(Experiment.objects.exists())

    @patch('experiment.pipeline.cycled_identify')
    def test_all_trials_failed(self, patched_identify):
        """Test every trial failing exits with code 2 after reporting"""
        patched_identify.side_effect = DegenerateDataError('no excitation')

        with self.assertRaises(CommandError) as context:
            self.call('run', '--config', self.config_path, '--out',
                      str(self.out))

        self.assertEqual(context.exception.returncode, cli.ALL_TRIALS_FAILED)
        self.assertTrue((self.out / 'run.csv').exists())
        statuses = TrialRecord.objects.values_list('status', flat=True)
        self.assertTrue(all(s.startswith('failed:') for s in statuses))

    def test_some_trials_failed(self):
        """Test partial failure still exits normally"""
        # The first trial fails, the second runs the real identification
        with patch('experiment.pipeline.cycled_identify',
                   side_effect=fail_first_call(cycled_identify)):
            stdout, _ = self.call('run', '--config', self.config_path,
                                  '--out', str(self.out), '--no-save')

        self.assertIn('1 of 2 trial(s) succeeded', stdout)


class StudyCommandTests(CommandTestCase):
    """Test the study command"""

    def test_noise_study(self):
        """Test the noise study runs every cell"""
        path = self.write_config(small_config(trials=1))

        self.call('study', '--study', 'noise', '--config', path,
                  '--out', str(self.out))

        summary = (self.out / 'study_noise_summary.csv').read_text()
        self.assertEqual(len(summary.splitlines()), 6)
        experiment = Experiment.objects.get()
        self.assertEqual(experiment.study, 'noise')
        self.assertEqual(experiment.trials.count(), 5)
        cells = set(experiment.trials.values_list('cell', flat=True))
        self.assertIn('N=2, N_data=400, sigma_du=0.1, sigma_dy=0.05', cells)

    def test_unknown_study(self):
        with self.assertRaises(CommandError) as raised:
            self.call('study', '--study', 'weather', '--config',
                      self.config_path)

        self.assertEqual(raised.exception.returncode, cli.CONFIG_ERROR)


class CommandLineTests(CommandTestCase):
    """Test exit codes when the commands run from a shell"""

    def run_from_argv(self, command, *args):
        """Run command as manage.py would, returning exit code and stderr"""
        module = import_module(f'experiment.management.commands.{command}')
        with patch('sys.stderr', new_callable=StringIO) as stderr:
            with self.assertRaises(SystemExit) as raised:
                module.Command().run_from_argv(
                    ['manage.py', command, *args]
                )
        return raised.exception.code, stderr.getvalue()

    def test_bad_study_is_a_config_error(self):
        """Test an unknown study exits 1, not the all failed code"""
        code, stderr = self.run_from_argv(
            'study', '--study', 'weather', '--config', self.config_path
        )

        self.assertEqual(code, cli.CONFIG_ERROR)
        self.assertIn('weather', stderr)

    def test_bad_format_is_a_config_error(self):
        code, _ = self.run_from_argv(
            'run', '--config', self.config_path, '--format', 'xml'
        )

        self.assertEqual(code, cli.CONFIG_ERROR)

    def test_missing_source_is_a_config_error(self):
        """Test report needs one of its sources"""
        code, stderr = self.run_from_argv('report')

        self.assertEqual(code, cli.CONFIG_ERROR)
        self.assertIn('usage', stderr)

    @patch('experiment.pipeline.cycled_identify')
    def test_all_failed_keeps_its_code(self, patched_identify):
        """Test exit code 2 still means every trial failed"""
        patched_identify.side_effect = DegenerateDataError('no excitation')

        code, _ = self.run_from_argv(
            'run', '--config', self.config_path, '--out', str(self.out),
            '--workers', '1',
        )

        self.assertEqual(code, cli.ALL_TRIALS_FAILED)


class ReportCommandTests(CommandTestCase):
    """Test the report command"""

    def setUp(self):
        super().setUp()
        self.call('run', '--config', self.config_path, '--out',
                  str(self.out))
        self.experiment = Experiment.objects.get()

    def test_report_from_csv(self):
        """Test summarizing a per-trial CSV file"""
        summary_dir = self.dir / 'summary'

        stdout, _ = self.call('report', '--input', str(self.out / 'run.csv'),
                              '--out', str(summary_dir))

        self.assertIn('mean_total_E', stdout)
        self.assertTrue((summary_dir / 'run_summary.csv').exists())

    def test_report_from_database(self):
        """Test summarizing a saved experiment as JSON"""
        summary_dir = self.dir / 'summary'

        self.call('report', '--experiment', str(self.experiment.id),
                  '--out', str(summary_dir), '--format', 'text')

        path = summary_dir / f'experiment_{self.experiment.id}_summary.json'
        records = json.loads(path.read_text())
        self.assertEqual(records[0]['trials'], 2)

    def test_csv_and_database_agree(self):
        """Test both sources give the same summary"""
        from_csv, _ = self.call('report', '--input',
                                str(self.out / 'run.csv'))
        from_db, _ = self.call('report', '--experiment',
                               str(self.experiment.id))

        self.assertEqual(from_csv, from_db)

    def test_missing_experiment(self):
        with self.assertRaises(CommandError) as context:
            self.call('report', '--experiment', '9999')

        self.assertEqual(context.exception.returncode, cli.CONFIG_ERROR)

    def test_missing_input(self):
        with self.assertRaises(CommandError) as context:
            self.call('report', '--input', str(self.dir / 'nothing.csv'))

        self.assertEqual(context.exception.returncode, cli.CONFIG_ERROR)

    def test_all_failed_input(self):
        """Test a table of failed trials exits with code 2"""
        path = self.out / 'run.csv'
        lines = path.read_text().splitlines()
        failed = [lines[0]] + [
            line.replace(',ok,', ',failed:Error: x,') for line in lines[1:]
        ]
        path.write_text('\n'.join(failed) + '\n')

        with self.assertRaises(CommandError) as context:
            self.call('report', '--input', str(path))

        self.assertEqual(context.exception.returncode, cli.ALL_TRIALS_FAILED)
