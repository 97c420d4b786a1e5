"""One identification trial, end to end.

1. excite the plant with Gaussian input and record noisy outputs
2. cycle the signals with period N
3. identify the N*n order cycled model
4. transform it into cyclic form and extract N vertex models
5. search the simplex for the best combination of vertices

The conventional order-n model identified from the same raw record is
the baseline every trial is compared against.
"""
import logging
import time
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from sysid.cyclic import VertexSet
from sysid.exceptions import IdentificationError, SingularTransformError
from sysid.metrics import fit, param_error, vertex_errors
from sysid.polytope import PolytopeModel
from sysid.pso import optimize, prediction_error_objective
from sysid.recovery import OBSERVABILITY, recover_vertices
from sysid.statespace import (
    NoiseSpec,
    generate_gaussian_signal,
    simulate,
    simulate_noise_free,
    to_controllable_companion,
)
from sysid.subspace import conventional_identify, cycled_identify

logger = logging.getLogger(__name__)

OK = 'ok'
# Independent random streams drawn from one trial seed
_STREAMS = ('input', 'process', 'observation', 'validation', 'pso')


def derive_trial_seeds(master_seed, trials):
    """Deterministic, independent per-trial seeds from one master seed."""
    children = np.random.SeedSequence(master_seed).spawn(trials)
    return [int(child.generate_state(1)[0]) for child in children]


def _stream_seeds(seed):
    state = np.random.SeedSequence(seed).generate_state(len(_STREAMS))
    return dict(zip(_STREAMS, (int(value) for value in state)))


@dataclass
class TrialReport:
    seed: int
    period: int
    n_data: int
    sigma_du: float
    sigma_dy: float
    status: str = OK
    vertex_errors: list = field(default_factory=list)
    total_error: float = float('nan')
    fit_conv: list = field(default_factory=list)
    fit_conv_mean: float = float('nan')
    fit_pso: list = field(default_factory=list)
    fit_pso_mean: float = float('nan')
    lambda_star: list = field(default_factory=list)
    e_lambda_star: float = float('nan')
    e_conv: float = float('nan')
    structure_residual: float = float('nan')
    condition_estimate: float = float('nan')
    route_used: str = ''
    wall_ms: float = float('nan')
    polytope: dict = None

    @property
    def ok(self):
        return self.status == OK

    @property
    def improvement(self):
        """Polytope FIT minus conventional FIT, in percentage points."""
        return self.fit_pso_mean - self.fit_conv_mean

    def to_dict(self):
        return asdict(self)


def _base_report(config, seed):
    return TrialReport(
        seed=seed,
        period=config.period,
        n_data=config.n_data,
        sigma_du=config.process_noise.std_dev,
        sigma_dy=config.observation_noise.std_dev,
    )


def _companion_vertices(vertex_set):
    """Bring observability-route vertices to the controllable companion
    basis the truth is expressed in.
    """
    return VertexSet(
        tuple(to_controllable_companion(v) for v in vertex_set),
        vertex_set.period,
    )


def _conventional_error(plant, conventional):
    if conventional.m != 1:
        return float('nan')
    try:
        return param_error(plant, to_controllable_companion(conventional))
    except SingularTransformError:
        return float('nan')


def _truth(plant):
    """The plant in the basis recovered vertices come out in"""
    if plant.m != 1:
        return plant
    return to_controllable_companion(plant)


def run_pipeline(config, seed):
    """Run one trial. Identification errors propagate to the caller."""
    plant = config.plant
    seeds = _stream_seeds(seed)
    report = _base_report(config, seed)

    inputs = generate_gaussian_signal(
        plant.m, config.n_data,
        config.input_noise.mean, config.input_noise.std_dev,
        seed=seeds['input'],
    )
    data = simulate(
        plant, inputs,
        process_noise=NoiseSpec(
            config.process_noise.mean, config.process_noise.std_dev,
            seeds['process'],
        ),
        observation_noise=NoiseSpec(
            config.observation_noise.mean, config.observation_noise.std_dev,
            seeds['observation'],
        ),
    )

    cycled = cycled_identify(
        data, config.period, plant.n,
        block_rows=config.block_rows, rank_tolerance=config.rank_tolerance,
    )
    recovery = recover_vertices(cycled, config.route)
    vertices = recovery.vertex_set
    if recovery.route_used == OBSERVABILITY and plant.m == 1:
        vertices = _companion_vertices(vertices)
    polytope = PolytopeModel(vertices)
    logger.debug('seed %d: %s route, residual %.3g', seed,
                 recovery.route_used, recovery.structure_residual)

    conventional = conventional_identify(
        data, plant.n,
        block_rows=config.block_rows, rank_tolerance=config.rank_tolerance,
    )

    # Validation compares against the noise-free plant output
    validation_inputs = generate_gaussian_signal(
        plant.m, config.n_val, 0.0, 1.0, seed=seeds['validation'],
    )
    validation_outputs = simulate_noise_free(plant, validation_inputs)

    objective = prediction_error_objective(
        polytope, validation_inputs, validation_outputs,
        penalty=config.pso.penalty_coefficient,
    )
    search = optimize(
        objective, polytope.period, replace(config.pso, seed=seeds['pso'])
    )
    combined = polytope.evaluate(search.best_weights)

    fit_conv = fit(
        validation_outputs,
        simulate_noise_free(conventional, validation_inputs),
    )
    fit_pso = fit(
        validation_outputs,
        simulate_noise_free(combined, validation_inputs),
    )

    truth = _truth(plant)
    errors = vertex_errors(truth, vertices)
    report.vertex_errors = errors
    report.total_error = float(sum(errors))
    report.fit_conv = list(fit_conv.per_output_fit)
    report.fit_conv_mean = fit_conv.mean_fit
    report.fit_pso = list(fit_pso.per_output_fit)
    report.fit_pso_mean = fit_pso.mean_fit
    report.lambda_star = search.best_weights.tolist()
    report.e_lambda_star = param_error(truth, combined)
    report.e_conv = _conventional_error(truth, conventional)
    report.structure_residual = recovery.structure_residual
    report.condition_estimate = recovery.condition_estimate
    report.route_used = recovery.route_used
    report.polytope = polytope.to_dict(
        seed=seed, route=recovery.route_used,
        lambda_star=report.lambda_star,
    )
    return report


def run_trial(config, seed):
    """run_pipeline that records failures instead of raising them."""
    started = time.perf_counter()
    try:
        report = run_pipeline(config, seed)
    except (IdentificationError, np.linalg.LinAlgError) as exc:
        logger.warning('trial %d failed: %s', seed, exc)
        report = _base_report(config, seed)
        report.status = f'failed:{type(exc).__name__}: {exc}'
    else:
        logger.info(
            'trial %d: total error %.4g, FIT %.2f vs %.2f', seed,
            report.total_error, report.fit_pso_mean, report.fit_conv_mean,
        )
    report.wall_ms = (time.perf_counter() - started) * 1000.0
    return report
