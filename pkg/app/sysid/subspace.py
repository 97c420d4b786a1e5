"""Subspace identification of state-space models of a fixed order.

Past-outputs MOESP scheme:

1. future/past block-Hankel matrices of inputs and outputs
2. LQ factorization of [Uf; Up; Yp; Yf]
3. SVD of the part of Yf explained by the past instruments (Up, Yp)
   but not by future inputs; its leading n left singular vectors span
   the extended observability matrix
4. C from the first block row, A from its shift invariance
5. B, D and the initial state from a linear least-squares fit of the
   output equation, with A and C fixed

The estimate lives in an arbitrary state basis; only its input/output
behaviour is meaningful.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from sysid.cyclic import CycledSystem, cycle_signal
from sysid.exceptions import (
    DegenerateDataError,
    DimensionError,
    IdentificationError,
    SignalLengthError,
)
from sysid.statespace import RANK_TOLERANCE, SignalRecord, StateSpaceModel

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class HankelBlock:
    """Block-Hankel matrix: block (r, c) holds signal[offset + r + c]."""
    data: np.ndarray
    block_rows: int
    columns: int
    signal_dim: int


def build_block_hankel(signal, block_rows, columns, offset=0):
    arr = np.array(signal, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if block_rows < 1 or columns < 1 or offset < 0:
        raise DimensionError(
            'block_rows and columns must be positive, offset nonnegative'
        )
    required = offset + block_rows + columns - 1
    if required > arr.shape[0]:
        raise SignalLengthError(
            f'block-Hankel with {block_rows} block rows, {columns} columns '
            f'and offset {offset} needs {required} samples, '
            f'signal has {arr.shape[0]}'
        )
    dim = arr.shape[1]
    data = np.empty((block_rows * dim, columns))
    for r in range(block_rows):
        start = offset + r
        data[r * dim:(r + 1) * dim, :] = arr[start:start + columns].T
    return HankelBlock(data, block_rows, columns, dim)


def default_block_rows(order, output_dim):
    return 2 * math.ceil(order / output_dim) + 2


@dataclass(frozen=True)
class IdentificationConfig:
    """order: target state dimension.
    block_rows: Hankel depth, None picks 2*ceil(order/q) + 2.
    """
    order: int
    block_rows: int = None
    rank_tolerance: float = RANK_TOLERANCE

    def __post_init__(self):
        if self.order < 1:
            raise IdentificationError(
                f'order must be positive, got {self.order}'
            )
        if self.block_rows is not None and self.block_rows < 1:
            raise IdentificationError(
                f'block_rows must be positive, got {self.block_rows}'
            )
        if not self.rank_tolerance > 0.0:
            raise IdentificationError('rank_tolerance must be positive')

    def block_rows_for(self, output_dim):
        if self.block_rows is not None:
            return self.block_rows
        return default_block_rows(self.order, output_dim)

    def minimum_length(self, input_dim, output_dim):
        """Samples needed so the stacked data matrix is wide enough
        for the LQ factorization.
        """
        i = self.block_rows_for(output_dim)
        return 2 * i - 1 + 2 * i * (input_dim + output_dim)


def lq(matrix):
    """L lower triangular with matrix = L @ Q (Q with orthonormal rows)."""
    Q, R = scipy.linalg.qr(matrix.T, mode='economic')
    return R.T, Q.T


def _estimate_input_matrices(A, C, inputs, outputs):
    """Least-squares B, D (and x0 for stable A) given A and C.

    y(k) = C A^k x0 + sum_{t<k} C A^(k-1-t) B u(t) + D u(k)
    is linear in (x0, vec B, vec D).
    """
    n = A.shape[0]
    length, m = inputs.shape
    q = C.shape[0]
    with_x0 = max(abs(np.linalg.eigvals(A))) < 1.0
    x0_cols = n if with_x0 else 0
    regressors = np.empty((length, q, x0_cols + n * m + q * m))

    free = np.array(C)
    forced = np.zeros((n, n * m))
    eye_n, eye_q = np.eye(n), np.eye(q)
    with np.errstate(over='ignore', invalid='ignore'):
        for k in range(length):
            if with_x0:
                regressors[k, :, :n] = free
                free = free @ A
            regressors[k, :, x0_cols:x0_cols + n * m] = C @ forced
            regressors[k, :, x0_cols + n * m:] = np.kron(inputs[k], eye_q)
            forced = A @ forced + np.kron(inputs[k], eye_n)

    regressors = regressors.reshape(length * q, -1)
    if not np.all(np.isfinite(regressors)):
        raise DegenerateDataError(
            'identified A is unstable; input matrices cannot be fitted'
        )
    theta = scipy.linalg.lstsq(regressors, outputs.reshape(-1))[0]
    B = theta[x0_cols:x0_cols + n * m].reshape((n, m), order='F')
    D = theta[x0_cols + n * m:].reshape((q, m), order='F')
    return B, D


def subspace_identify(data, config):
    """Identify a model of order config.order from a SignalRecord."""
    u, y = data.inputs, data.outputs
    m, q = data.input_dim, data.output_dim
    n = config.order
    i = config.block_rows_for(q)
    if i * q <= n:
        raise DimensionError(
            f'block_rows * output_dim = {i * q} must exceed order {n}'
        )
    minimum = config.minimum_length(m, q)
    if data.length < minimum:
        raise SignalLengthError(
            f'order {n} with {i} block rows needs at least {minimum} '
            f'samples, got {data.length}'
        )

    columns = data.length - 2 * i + 1
    Up = build_block_hankel(u, i, columns, 0).data
    Uf = build_block_hankel(u, i, columns, i).data
    Yp = build_block_hankel(y, i, columns, 0).data
    Yf = build_block_hankel(y, i, columns, i).data

    stacked = np.vstack([Uf, Up, Yp, Yf]) / math.sqrt(columns)
    L, _ = lq(stacked)
    future_in = i * m
    past = i * (m + q)
    L32 = L[future_in + past:, future_in:future_in + past]

    U_svd, singular_values, _ = scipy.linalg.svd(L32, full_matrices=False)
    logger.debug('subspace singular values: %s', singular_values[:n + 2])
    if (singular_values[0] == 0.0 or singular_values[n - 1]
            <= config.rank_tolerance * singular_values[0]):
        raise DegenerateDataError(
            f'observability estimate has rank below the requested '
            f'order {n}'
        )

    gamma = U_svd[:, :n] * np.sqrt(singular_values[:n])
    C = gamma[:q]
    A = scipy.linalg.lstsq(gamma[:-q], gamma[q:])[0]
    B, D = _estimate_input_matrices(A, C, u, y)
    return StateSpaceModel(A, B, C, D)


def conventional_identify(data, order, block_rows=None,
                          rank_tolerance=RANK_TOLERANCE):
    """Single-model baseline: subspace identification on raw signals."""
    config = IdentificationConfig(order, block_rows, rank_tolerance)
    return subspace_identify(data, config)


def cycled_identify(data, period, order, block_rows=None,
                    rank_tolerance=RANK_TOLERANCE):
    """Identify the order N*n cycled model from raw signals.

    Returns the estimate as a CycledSystem with base dims (n, m, q);
    it does not carry the cyclic pattern until structure recovery.
    """
    cycled = SignalRecord(
        cycle_signal(data.inputs, period),
        cycle_signal(data.outputs, period),
    )
    config = IdentificationConfig(period * order, block_rows, rank_tolerance)
    estimate = subspace_identify(cycled, config)
    return CycledSystem.from_model(
        estimate, period, (order, data.input_dim, data.output_dim)
    )


def cycled_minimum_length(period, order, input_dim, output_dim,
                          block_rows=None):
    config = IdentificationConfig(period * order, block_rows)
    return config.minimum_length(period * input_dim, period * output_dim)
