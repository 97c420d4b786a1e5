"""Global-best particle swarm search over simplex weights.

Particles move freely in R^N. Objectives see the raw position; the
prediction-error objective projects it onto the simplex and adds a
quadratic penalty for the distance it had to travel.
"""
import logging
from dataclasses import dataclass

import numpy as np

from sysid.exceptions import DimensionError, IdentificationError
from sysid.polytope import SimplexWeights, validate_simplex
from sysid.statespace import as_signal, simulate_noise_free

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PsoParams:
    population: int = 50
    max_iterations: int = 200
    inertia: float = 0.7
    cognitive: float = 2.0
    social: float = 2.0
    penalty_coefficient: float = 1e3
    seed: int = 0
    # None leaves velocities unclamped
    max_velocity: float = None

    def __post_init__(self):
        if self.population < 2:
            raise IdentificationError('population must be at least 2')
        if self.max_iterations < 1:
            raise IdentificationError('max_iterations must be at least 1')
        if not 0.0 < self.inertia <= 1.0:
            raise IdentificationError('inertia must lie in (0, 1]')
        if not (self.cognitive > 0.0 and self.social > 0.0):
            raise IdentificationError('cognitive and social must be positive')
        if not self.penalty_coefficient > 0.0:
            raise IdentificationError('penalty_coefficient must be positive')
        if self.seed < 0:
            raise IdentificationError('seed must be nonnegative')
        if self.max_velocity is not None and not self.max_velocity > 0.0:
            raise IdentificationError('max_velocity must be positive')


@dataclass(frozen=True, eq=False)
class ObjectiveReport:
    best_weights: SimplexWeights
    best_value: float
    value_history: tuple
    evaluations: int


def project_to_simplex(raw):
    """Clamp negatives to zero and renormalize; all-zero falls back to
    uniform weights.
    """
    arr = np.asarray(raw, dtype=float).reshape(-1)
    if arr.size == 0:
        raise DimensionError('cannot project an empty weight vector')
    clamped = np.clip(arr, 0.0, None)
    total = clamped.sum()
    if not total > 0.0 or not np.isfinite(total):
        return SimplexWeights(np.full(arr.size, 1.0 / arr.size))
    return SimplexWeights(clamped / total)


class PredictionErrorObjective:
    """Sum of squared validation errors of the polytope model at the
    projected weights, plus penalty * (simplex violation)^2.
    """

    def __init__(self, polytope, validation_inputs, validation_outputs,
                 penalty=1e3):
        _, m, q = polytope.dims
        self.polytope = polytope
        self.inputs = as_signal(validation_inputs, m, 'validation_inputs')
        self.outputs = as_signal(validation_outputs, q, 'validation_outputs')
        if self.inputs.shape[0] != self.outputs.shape[0]:
            raise DimensionError(
                'validation inputs and outputs differ in length'
            )
        self.penalty = float(penalty)

    @property
    def dimension(self):
        return self.polytope.period

    def prediction_error(self, weights):
        model = self.polytope.evaluate(weights)
        predicted = simulate_noise_free(model, self.inputs)
        with np.errstate(over='ignore', invalid='ignore'):
            value = float(np.sum((self.outputs - predicted) ** 2))
        # Unstable combinations blow up; rank them last
        return value if np.isfinite(value) else np.inf

    def __call__(self, raw):
        violation = validate_simplex(raw).violation
        value = self.prediction_error(project_to_simplex(raw))
        return value + self.penalty * violation ** 2

    def calibrate_penalty(self, initial_values, coefficient):
        """Scale the penalty to the size of typical objective values."""
        finite = [value for value in initial_values if np.isfinite(value)]
        median = float(np.median(finite)) if finite else 0.0
        self.penalty = coefficient * median if median > 0.0 else coefficient
        logger.debug('penalty set to %.4g', self.penalty)


def prediction_error_objective(polytope, validation_inputs,
                               validation_outputs, penalty=1e3):
    return PredictionErrorObjective(
        polytope, validation_inputs, validation_outputs, penalty
    )


def _evaluate(objective, positions, executor):
    if executor is None:
        return np.array([objective(x) for x in positions], dtype=float)
    # map() keeps particle order whatever order the workers finish in
    return np.array(list(executor.map(objective, positions)), dtype=float)


def optimize(objective, dimension, params=None, executor=None):
    """Minimize objective over raw weight vectors of length dimension.

    Random numbers come from one seeded generator and are drawn for
    the whole swarm before each evaluation round, so the result does
    not depend on how evaluations are scheduled.
    """
    if dimension < 1:
        raise DimensionError(f'dimension must be positive, got {dimension}')
    params = params or PsoParams()
    rng = np.random.default_rng(params.seed)
    shape = (params.population, dimension)

    # Uniform on the simplex: normalized i.i.d. exponentials
    draws = rng.standard_exponential(shape)
    positions = draws / draws.sum(axis=1, keepdims=True)
    velocities = np.zeros(shape)

    values = _evaluate(objective, positions, executor)
    evaluations = params.population
    calibrate = getattr(objective, 'calibrate_penalty', None)
    if calibrate is not None:
        calibrate(values, params.penalty_coefficient)

    best_positions = positions.copy()
    best_values = values.copy()
    leader = int(np.argmin(best_values))
    global_position = best_positions[leader].copy()
    global_value = float(best_values[leader])

    history = []
    for _ in range(params.max_iterations):
        r1 = rng.random(shape)
        r2 = rng.random(shape)
        velocities = (
            params.inertia * velocities
            + params.cognitive * r1 * (best_positions - positions)
            + params.social * r2 * (global_position - positions)
        )
        if params.max_velocity is not None:
            np.clip(velocities, -params.max_velocity, params.max_velocity,
                    out=velocities)
        positions = positions + velocities

        values = _evaluate(objective, positions, executor)
        evaluations += params.population

        improved = values < best_values
        best_positions[improved] = positions[improved]
        best_values[improved] = values[improved]
        leader = int(np.argmin(best_values))
        if best_values[leader] < global_value:
            global_value = float(best_values[leader])
            global_position = best_positions[leader].copy()
        history.append(global_value)

    logger.debug(
        'swarm finished: best %.6g after %d evaluations',
        global_value, evaluations,
    )
    return ObjectiveReport(
        best_weights=project_to_simplex(global_position),
        best_value=global_value,
        value_history=tuple(history),
        evaluations=evaluations,
    )
