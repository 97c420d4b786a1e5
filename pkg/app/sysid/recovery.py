"""Coordinate transformation that restores the cyclic pattern of an
identified cycled model, and extraction of its N vertex models.

Controllability route:

    T = sum_{j<n} A*^j B* S_m^(j+1) G_j

Observability route:

    T^-1 = sum_{j<n} F_j S_q^j C* A*^j

G_j and F_j are block diagonal with one block per phase. The default
G_j block is the m x n matrix with a single one at (0, j), so column j
of every phase block of T is A*^j B* applied to the first input of the
matching phase. That puts each phase in controllable companion form
(B_mi = e1, ones on the subdiagonal of A_mi). The default F_j block is
the n x q matrix with a single one at (j, 0): each phase lands in the
observable form built from the first output.
"""
import logging
from dataclasses import dataclass

import numpy as np

from sysid.cyclic import (
    CycledSystem,
    cyclic_shift_matrix,
    extract_phase_parameters,
)
from sysid.exceptions import (
    SingularTransformError,
    UnrecoverableStructureError,
)
from sysid.statespace import check_controllability_observability

logger = logging.getLogger(__name__)

CONTROLLABILITY = 'controllability'
OBSERVABILITY = 'observability'
AUTO = 'auto'
ROUTES = (CONTROLLABILITY, OBSERVABILITY, AUTO)

# Transforms with a larger condition number are treated as singular
SINGULAR_CONDITION = 1e12


@dataclass(frozen=True, eq=False)
class TransformMatrix:
    T: np.ndarray
    T_inverse: np.ndarray
    condition_estimate: float
    method: str


@dataclass(frozen=True, eq=False)
class SelectorBlocks:
    """One block-diagonal selector per index j = 0..n-1."""
    blocks: tuple


def default_controllability_selectors(period, base_dims):
    n, m, _ = base_dims
    blocks = []
    for j in range(n):
        block = np.zeros((m, n))
        block[0, j] = 1.0
        blocks.append(np.kron(np.eye(period), block))
    return SelectorBlocks(tuple(blocks))


def default_observability_selectors(period, base_dims):
    n, _, q = base_dims
    blocks = []
    for j in range(n):
        block = np.zeros((n, q))
        block[j, 0] = 1.0
        blocks.append(np.kron(np.eye(period), block))
    return SelectorBlocks(tuple(blocks))


def _checked_condition(matrix, method):
    with np.errstate(divide='ignore', invalid='ignore'):
        condition = float(np.linalg.cond(matrix))
    if not np.isfinite(condition) or condition > SINGULAR_CONDITION:
        raise SingularTransformError(
            f'{method} transform is singular (condition {condition:.3g})',
            condition_estimate=condition,
        )
    return condition


def build_transform_controllability(cycled_estimate, selectors=None):
    n, m, _ = cycled_estimate.base_dims
    N = cycled_estimate.period
    if selectors is None:
        selectors = default_controllability_selectors(
            N, cycled_estimate.base_dims
        )
    A, B = cycled_estimate.A_cyc, cycled_estimate.B_cyc
    shift = cyclic_shift_matrix(m, N)

    T = np.zeros_like(A)
    reach = np.array(B)
    shift_power = shift
    for j in range(n):
        T += reach @ shift_power @ selectors.blocks[j]
        reach = A @ reach
        shift_power = shift_power @ shift

    condition = _checked_condition(T, CONTROLLABILITY)
    return TransformMatrix(T, np.linalg.inv(T), condition, CONTROLLABILITY)


def build_transform_observability(cycled_estimate, selectors=None):
    n, _, q = cycled_estimate.base_dims
    N = cycled_estimate.period
    if selectors is None:
        selectors = default_observability_selectors(
            N, cycled_estimate.base_dims
        )
    A, C = cycled_estimate.A_cyc, cycled_estimate.C_cyc
    shift = cyclic_shift_matrix(q, N)

    T_inverse = np.zeros_like(A)
    observe = np.array(C)
    shift_power = np.eye(shift.shape[0])
    for j in range(n):
        T_inverse += selectors.blocks[j] @ shift_power @ observe
        observe = observe @ A
        shift_power = shift_power @ shift

    condition = _checked_condition(T_inverse, OBSERVABILITY)
    return TransformMatrix(
        np.linalg.inv(T_inverse), T_inverse, condition, OBSERVABILITY
    )


def apply_similarity(cycled_estimate, transform):
    """(T^-1 A T, T^-1 B, C T, D); the cyclic pattern is not asserted."""
    T, T_inv = transform.T, transform.T_inverse
    A, B, C, D = cycled_estimate.matrices()
    return CycledSystem(
        T_inv @ A @ T,
        T_inv @ B,
        C @ T,
        D,
        cycled_estimate.period,
        cycled_estimate.base_dims,
    )


def _pin_controllability_pattern(cycled):
    """Write the exact zeros and ones the default controllability
    selectors produce: phase columns 0..n-2 of A_cyc and the first
    input column of each phase of B_cyc.
    """
    n, m, _ = cycled.base_dims
    N = cycled.period
    A = np.array(cycled.A_cyc)
    B = np.array(cycled.B_cyc)
    for s in range(N):
        nxt = (s + 1) % N
        for r in range(n - 1):
            A[:, s * n + r] = 0.0
            A[nxt * n + r + 1, s * n + r] = 1.0
        B[:, s * m] = 0.0
        B[nxt * n, s * m] = 1.0
    return CycledSystem(A, B, cycled.C_cyc, cycled.D_cyc, N, cycled.base_dims)


def _pin_observability_pattern(cycled):
    """Exact rows 0..n-2 of each phase of A_cyc and the first output
    row of each phase of C_cyc for the default observability selectors.
    """
    n, _, q = cycled.base_dims
    N = cycled.period
    A = np.array(cycled.A_cyc)
    C = np.array(cycled.C_cyc)
    for p in range(N):
        prev = (p - 1) % N
        for r in range(n - 1):
            A[p * n + r, :] = 0.0
            A[p * n + r, prev * n + r + 1] = 1.0
        C[p * q, :] = 0.0
        C[p * q, p * n] = 1.0
    return CycledSystem(
        A, cycled.B_cyc, C, cycled.D_cyc, N, cycled.base_dims
    )


@dataclass(frozen=True, eq=False)
class RecoveryResult:
    vertex_set: object
    structure_residual: float
    condition_estimate: float
    route_used: str
    structured: CycledSystem


def _recover_with(cycled_estimate, route):
    if route == CONTROLLABILITY:
        transform = build_transform_controllability(cycled_estimate)
        pin = _pin_controllability_pattern
    else:
        transform = build_transform_observability(cycled_estimate)
        pin = _pin_observability_pattern
    structured = pin(apply_similarity(cycled_estimate, transform))
    extraction = extract_phase_parameters(structured)
    return RecoveryResult(
        vertex_set=extraction.vertex_set,
        structure_residual=extraction.structure_residual,
        condition_estimate=transform.condition_estimate,
        route_used=route,
        structured=structured,
    )


def recover_vertices(cycled_estimate, route=AUTO):
    """Transform an identified cycled model into cyclic form and
    extract its N vertex models.

    route='auto' tries the controllability route first and falls back
    to the observability route when the transform is singular.
    """
    if route not in ROUTES:
        raise ValueError(f'unknown route {route!r}, expected one of {ROUTES}')

    reach = check_controllability_observability(cycled_estimate.as_model())
    if not (reach.controllable and reach.observable):
        raise UnrecoverableStructureError(
            'cycled estimate must be controllable and observable '
            f'(ranks {reach.controllability_rank}, '
            f'{reach.observability_rank} of {cycled_estimate.A_cyc.shape[0]})'
        )

    attempts = [CONTROLLABILITY, OBSERVABILITY] if route == AUTO else [route]
    failures = []
    for attempt in attempts:
        try:
            result = _recover_with(cycled_estimate, attempt)
        except SingularTransformError as exc:
            logger.info('%s route failed: %s', attempt, exc)
            failures.append(str(exc))
            continue
        logger.debug(
            '%s route: residual %.3g, condition %.3g',
            attempt, result.structure_residual, result.condition_estimate,
        )
        return result
    raise UnrecoverableStructureError('; '.join(failures))
