"""Seeded Monte Carlo studies over noise level, data length and period."""
import logging
import multiprocessing
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from experiment.config import NoiseLevel
from experiment.pipeline import derive_trial_seeds, run_trial

logger = logging.getLogger(__name__)

NOISE = 'noise'
NDATA = 'ndata'
PERIOD = 'period'
STUDIES = (NOISE, NDATA, PERIOD)

# (process noise std, observation noise std)
NOISE_GRID = (
    (0.01, 0.005),
    (0.05, 0.025),
    (0.10, 0.05),
    (0.0, 0.05),
    (0.10, 0.0),
)
NDATA_GRID = (1000, 2000, 4000, 8000)
PERIOD_GRID = (2, 3, 4, 6, 8)
# Conditions held fixed while data length or period is swept
HIGH_NOISE = (0.10, 0.05)
NDATA_STUDY_PERIOD = 6
PERIOD_STUDY_NDATA = 3000

# One cell of a study table is identified by these trial columns
CELL_KEYS = ['N', 'N_data', 'sigma_du', 'sigma_dy']


@dataclass
class ExperimentResult:
    kind: str
    config: object
    reports: list = field(default_factory=list)
    study: str = ''

    @property
    def failed(self):
        return sum(1 for report in self.reports if not report.ok)

    @property
    def all_failed(self):
        return bool(self.reports) and self.failed == len(self.reports)


def _with_noise(config, sigma_du, sigma_dy):
    return config.with_changes(
        process_noise=NoiseLevel(config.process_noise.mean, sigma_du),
        observation_noise=NoiseLevel(config.observation_noise.mean, sigma_dy),
    )


def study_cells(study, config):
    """Configs for every cell of a study, in table order."""
    if study == NOISE:
        return [_with_noise(config, du, dy) for du, dy in NOISE_GRID]
    if study == NDATA:
        base = _with_noise(config, *HIGH_NOISE)
        return [
            base.with_changes(period=NDATA_STUDY_PERIOD, n_data=n_data)
            for n_data in NDATA_GRID
        ]
    if study == PERIOD:
        base = _with_noise(config, *HIGH_NOISE)
        return [
            base.with_changes(period=period, n_data=PERIOD_STUDY_NDATA)
            for period in PERIOD_GRID
        ]
    raise ValueError(f'unknown study {study!r}, expected one of {STUDIES}')


def run_trials(config, seeds, workers=1):
    """Run one trial per seed. Results come back in seed order whatever
    the number of workers.
    """
    jobs = [(config, seed) for seed in seeds]
    if workers > 1 and len(jobs) > 1:
        with multiprocessing.Pool(processes=workers) as pool:
            return pool.starmap(run_trial, jobs)
    return [run_trial(*job) for job in jobs]


def run_experiment(config, workers=1):
    """The `run` verb: config.trials trials of a single configuration."""
    seeds = derive_trial_seeds(config.seed, config.trials)
    reports = run_trials(config, seeds, workers)
    return ExperimentResult(kind='run', config=config, reports=reports)


def run_study(study, config, trials=None, workers=1):
    """Sweep a study grid. Every cell reuses the same per-trial seeds,
    so cells differ only in the swept setting.
    """
    trials = config.trials if trials is None else trials
    if trials < 1:
        raise ValueError('trials must be at least 1')
    seeds = derive_trial_seeds(config.seed, trials)
    result = ExperimentResult(kind='study', config=config, study=study)
    for cell in study_cells(study, config):
        logger.info(
            '%s study cell: N=%d, N_data=%d, sigma=(%g, %g)', study,
            cell.period, cell.n_data, cell.process_noise.std_dev,
            cell.observation_noise.std_dev,
        )
        result.reports.extend(run_trials(cell, seeds, workers))
    return result


def _vertex_columns(frame):
    columns = [c for c in frame.columns if c.startswith('E_')
               and c[2:].isdigit()]
    return sorted(columns, key=lambda c: int(c[2:]))


def _summarize_cell(cell):
    ok = cell[cell['status'] == 'ok']
    vertex_columns = [
        c for c in _vertex_columns(cell) if ok[c].notna().any()
    ]
    vertex_values = ok[vertex_columns].to_numpy(dtype=float)
    pooled = vertex_values[~np.isnan(vertex_values)]
    improvement = ok['fit_pso_mean'] - ok['fit_conv_mean']

    def pooled_stat(func):
        return float(func(pooled)) if pooled.size else np.nan

    return pd.Series({
        'trials': len(cell),
        'failed': len(cell) - len(ok),
        'mean_total_E': ok['total_E'].mean(),
        'std_total_E': ok['total_E'].std(),
        # Spread of each vertex across trials, averaged over vertices
        'avg_std_E_i': ok[vertex_columns].std().mean(),
        'min_E_i': pooled_stat(np.min),
        'max_E_i': pooled_stat(np.max),
        'mean_E_i': pooled_stat(np.mean),
        'std_E_i': (
            float(np.std(pooled, ddof=1)) if pooled.size > 1 else np.nan
        ),
        'mean_fit_conv': ok['fit_conv_mean'].mean(),
        'std_fit_conv': ok['fit_conv_mean'].std(),
        'mean_fit_pso': ok['fit_pso_mean'].mean(),
        'std_fit_pso': ok['fit_pso_mean'].std(),
        'mean_improvement': improvement.mean(),
        'pso_not_worse_fraction': (
            float((improvement >= 0).mean()) if len(ok) else np.nan
        ),
    })


def summarize(frame):
    """Aggregate a per-trial frame (the CSV layout) into one row per
    study cell. Failed trials are counted but not averaged; std columns
    are NaN when fewer than two trials succeeded.
    """
    if frame.empty:
        raise ValueError('no trials to summarize')
    groups = frame.groupby(CELL_KEYS, sort=False, dropna=False)
    rows = [
        pd.concat([pd.Series(dict(zip(CELL_KEYS, key))),
                   _summarize_cell(cell)])
        for key, cell in groups
    ]
    table = pd.DataFrame(rows).reset_index(drop=True)
    counts = ['N', 'N_data', 'trials', 'failed']
    table[counts] = table[counts].astype(int)
    return table
