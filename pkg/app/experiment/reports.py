"""Per-trial CSV tables and JSON text reports.

CSV column order is fixed:

    seed, N, N_data, sigma_du, sigma_dy, E_0..E_{N-1}, total_E,
    fit_conv_mean, fit_pso_mean, fit_conv_y1..yq, fit_pso_y1..yq,
    E_lambda_star, lambda_0..lambda_{N-1}, structure_residual,
    condition_estimate, status, wall_ms

Vertex and weight columns are padded to the largest period in the
table. wall_ms stays empty unless timing was requested, so that two
runs with the same master seed write identical files.
"""
import json
import logging
import math
from pathlib import Path

import pandas as pd

from experiment.pipeline import TrialReport
from experiment.studies import summarize

logger = logging.getLogger(__name__)

CSV = 'csv'
TEXT = 'text'
FORMATS = (CSV, TEXT)


def csv_columns(max_period, output_dim):
    return (
        ['seed', 'N', 'N_data', 'sigma_du', 'sigma_dy']
        + [f'E_{i}' for i in range(max_period)]
        + ['total_E', 'fit_conv_mean', 'fit_pso_mean']
        + [f'fit_conv_y{j + 1}' for j in range(output_dim)]
        + [f'fit_pso_y{j + 1}' for j in range(output_dim)]
        + ['E_lambda_star']
        + [f'lambda_{i}' for i in range(max_period)]
        + ['structure_residual', 'condition_estimate', 'status', 'wall_ms']
    )


def _row(report, timing):
    row = {
        'seed': report.seed,
        'N': report.period,
        'N_data': report.n_data,
        'sigma_du': report.sigma_du,
        'sigma_dy': report.sigma_dy,
        'total_E': report.total_error,
        'fit_conv_mean': report.fit_conv_mean,
        'fit_pso_mean': report.fit_pso_mean,
        'E_lambda_star': report.e_lambda_star,
        'structure_residual': report.structure_residual,
        'condition_estimate': report.condition_estimate,
        'status': report.status,
        'wall_ms': report.wall_ms if timing else None,
    }
    for i, value in enumerate(report.vertex_errors):
        row[f'E_{i}'] = value
    for i, value in enumerate(report.lambda_star):
        row[f'lambda_{i}'] = value
    for j, value in enumerate(report.fit_conv):
        row[f'fit_conv_y{j + 1}'] = value
    for j, value in enumerate(report.fit_pso):
        row[f'fit_pso_y{j + 1}'] = value
    return row


def trials_frame(reports, output_dim, timing=False):
    """One row per trial in the fixed CSV column order."""
    if not reports:
        raise ValueError('no trial reports to tabulate')
    max_period = max(report.period for report in reports)
    columns = csv_columns(max_period, output_dim)
    rows = [_row(report, timing) for report in reports]
    return pd.DataFrame(rows).reindex(columns=columns)


def json_safe(value):
    """JSON-safe copy: NaN and inf become null."""
    if isinstance(value, dict):
        return {key: json_safe(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(item) for item in value]
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if hasattr(value, 'item'):
        return json_safe(value.item())
    return value


def report_document(result, timing=False):
    """Structured text report: config, aggregate table and every trial
    including its vertex models.
    """
    frame = trials_frame(result.reports, result.config.plant.q, timing)
    trials = []
    for report in result.reports:
        data = report.to_dict()
        if not timing:
            data.pop('wall_ms')
        trials.append(data)
    return json_safe({
        'kind': result.kind,
        'study': result.study,
        'config': result.config.describe(),
        'failed_trials': result.failed,
        'aggregate': summarize(frame).to_dict(orient='records'),
        'trials': trials,
    })


def _report_name(result):
    return f'{result.kind}_{result.study}' if result.study else result.kind


def emit_report(result, out_dir, fmt=CSV, timing=False):
    """Write the report files for result into out_dir.

    csv writes <name>.csv (one row per trial) and <name>_summary.csv
    (one row per study cell); text writes <name>.json. Returns the
    paths written.
    """
    if fmt not in FORMATS:
        raise ValueError(f'unknown format {fmt!r}, expected one of {FORMATS}')
    if not result.reports:
        raise ValueError('nothing to report: no trials were run')
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f'cannot create output directory {out}: {exc}') from exc

    name = _report_name(result)
    if fmt == CSV:
        frame = trials_frame(result.reports, result.config.plant.q, timing)
        paths = [out / f'{name}.csv', out / f'{name}_summary.csv']
        tables = [frame, summarize(frame)]
        for path, table in zip(paths, tables):
            _write(path, lambda handle, t=table: t.to_csv(
                handle, index=False, lineterminator='\n'
            ))
    else:
        document = report_document(result, timing)
        paths = [out / f'{name}.json']
        _write(paths[0], lambda handle: handle.write(
            json.dumps(document, indent=2) + '\n'
        ))
    for path in paths:
        logger.info('wrote %s', path)
    return paths


def _write(path, writer):
    try:
        with open(path, 'w', newline='') as handle:
            writer(handle)
    except OSError as exc:
        raise OSError(f'cannot write report {path}: {exc}') from exc


def read_trials(path):
    """Load a per-trial CSV written by emit_report."""
    try:
        return pd.read_csv(path, keep_default_na=True)
    except OSError as exc:
        raise OSError(f'cannot read trials from {path}: {exc}') from exc


def reports_from_records(records):
    """Rebuild TrialReports from stored dicts (e.g. saved trials)."""
    return [TrialReport(**record) for record in records]
