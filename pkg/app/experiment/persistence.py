"""Saving experiment results to the database and loading them back."""
import logging

from django.db import transaction

from core.models import Experiment, TrialRecord
from experiment.reports import json_safe, reports_from_records

logger = logging.getLogger(__name__)

STATUS_LENGTH = TrialRecord._meta.get_field('status').max_length


def cell_label(report):
    return (
        f'N={report.period}, N_data={report.n_data}, '
        f'sigma_du={report.sigma_du:g}, sigma_dy={report.sigma_dy:g}'
    )


@transaction.atomic
def save_result(result):
    """Store an ExperimentResult with one TrialRecord per trial."""
    experiment = Experiment.objects.create(
        kind=result.kind,
        study=result.study,
        seed=result.config.seed,
        config=json_safe(result.config.describe()),
    )
    TrialRecord.objects.bulk_create([
        TrialRecord(
            experiment=experiment,
            cell=cell_label(report),
            seed=report.seed,
            status=report.status[:STATUS_LENGTH],
            total_error=json_safe(report.total_error),
            fit_conv_mean=json_safe(report.fit_conv_mean),
            fit_pso_mean=json_safe(report.fit_pso_mean),
            report=json_safe(report.to_dict()),
        )
        for report in result.reports
    ])
    logger.info('saved experiment %d with %d trials',
                experiment.id, len(result.reports))
    return experiment


def load_reports(experiment):
    """TrialReports of a saved experiment, in the order they were run."""
    records = experiment.trials.order_by('id').values_list('report', flat=True)
    return reports_from_records(records)


def output_dim(experiment):
    return experiment.config['plant_matrices']['q']
