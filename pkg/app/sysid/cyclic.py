"""Cyclic reformulation with period N.

A cycled signal places sample k in block (k mod N) and zeros elsewhere.
The cycled system of an N-periodic system (A_i, B_i, C_i, D_i) is

    A_cyc[(i+1) mod N, i] = A_i      B_cyc[(i+1) mod N, i] = B_i
    C_cyc[i, i] = C_i                D_cyc[i, i] = D_i

with all other blocks zero. Phase i is the block whose subdiagonal
entry sits in row-block (i+1) mod N, column-block i; extraction and
structure recovery both use this indexing.
"""
import logging
from dataclasses import dataclass

import numpy as np

from sysid.exceptions import DimensionError, SignalLengthError
from sysid.statespace import (
    StateSpaceModel,
    as_matrix,
    markov_parameters,
)

logger = logging.getLogger(__name__)


def _check_period(period):
    if period < 1:
        raise DimensionError(f'period must be positive, got {period}')


def _blocks(size, period):
    return [slice(i * size, (i + 1) * size) for i in range(period)]


def cycle_signal(signal, period):
    """(length, d) signal -> (length, N*d) cycled signal."""
    _check_period(period)
    arr = np.array(signal, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise SignalLengthError('cannot cycle an empty signal')
    length, dim = arr.shape
    cycled = np.zeros((length, period * dim))
    phases = np.arange(length) % period
    for p in range(period):
        rows = phases == p
        cycled[rows, p * dim:(p + 1) * dim] = arr[rows]
    return cycled


def uncycle_signal(cycled, period):
    """Read block (k mod N) of each cycled vector."""
    _check_period(period)
    arr = np.array(cycled, dtype=float)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise SignalLengthError('cannot uncycle an empty signal')
    if arr.shape[1] % period:
        raise DimensionError(
            f'cycled width {arr.shape[1]} is not a multiple of {period}'
        )
    dim = arr.shape[1] // period
    phases = np.arange(arr.shape[0]) % period
    signal = np.empty((arr.shape[0], dim))
    for p in range(period):
        rows = phases == p
        signal[rows] = arr[rows, p * dim:(p + 1) * dim]
    return signal


def cyclic_shift_matrix(d, period):
    """N*d x N*d block permutation with I_d on the first block
    superdiagonal and in the bottom-left corner.
    """
    _check_period(period)
    if d < 1:
        raise DimensionError(f'd must be positive, got {d}')
    circulant = np.roll(np.eye(period), 1, axis=1)
    return np.kron(circulant, np.eye(d))


@dataclass(frozen=True, eq=False)
class CycledSystem:
    """Block-structured (A_cyc, B_cyc, C_cyc, D_cyc) for period N."""
    A_cyc: np.ndarray
    B_cyc: np.ndarray
    C_cyc: np.ndarray
    D_cyc: np.ndarray
    period: int
    base_dims: tuple

    def __post_init__(self):
        _check_period(self.period)
        n, m, q = self.base_dims
        N = self.period
        expected = {
            'A_cyc': (N * n, N * n),
            'B_cyc': (N * n, N * m),
            'C_cyc': (N * q, N * n),
            'D_cyc': (N * q, N * m),
        }
        for name, shape in expected.items():
            matrix = as_matrix(getattr(self, name), name)
            if matrix.shape != shape:
                raise DimensionError(
                    f'{name} has shape {matrix.shape}, expected {shape} '
                    f'for N={N} and (n, m, q)={self.base_dims}'
                )
            object.__setattr__(self, name, matrix)
        object.__setattr__(self, 'base_dims', (n, m, q))

    @classmethod
    def from_model(cls, model, period, base_dims):
        """Wrap an identified Nn-order model as a cycled system."""
        return cls(*model.matrices(), period=period, base_dims=base_dims)

    def as_model(self):
        return StateSpaceModel(self.A_cyc, self.B_cyc, self.C_cyc, self.D_cyc)

    def matrices(self):
        return self.A_cyc, self.B_cyc, self.C_cyc, self.D_cyc


@dataclass(frozen=True, eq=False)
class VertexSet:
    """N vertex models sharing the same (n, m, q)."""
    vertices: tuple
    period: int

    def __post_init__(self):
        vertices = tuple(self.vertices)
        if len(vertices) != self.period:
            raise DimensionError(
                f'{len(vertices)} vertices for period {self.period}'
            )
        dims = {vertex.dims for vertex in vertices}
        if len(dims) != 1:
            raise DimensionError(f'vertices disagree on dimensions: {dims}')
        object.__setattr__(self, 'vertices', vertices)

    @property
    def dims(self):
        return self.vertices[0].dims

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __getitem__(self, index):
        return self.vertices[index]


def build_cyclic(vertices, period):
    """Cycled system of the N-periodic system whose phase i is vertices[i]."""
    _check_period(period)
    n, m, q = vertices[0].dims
    N = period
    A_cyc = np.zeros((N * n, N * n))
    B_cyc = np.zeros((N * n, N * m))
    C_cyc = np.zeros((N * q, N * n))
    D_cyc = np.zeros((N * q, N * m))
    sn, sm, sq = _blocks(n, N), _blocks(m, N), _blocks(q, N)
    for i, vertex in enumerate(vertices):
        nxt = (i + 1) % N
        A_cyc[sn[nxt], sn[i]] = vertex.A
        B_cyc[sn[nxt], sm[i]] = vertex.B
        C_cyc[sq[i], sn[i]] = vertex.C
        D_cyc[sq[i], sm[i]] = vertex.D
    return CycledSystem(A_cyc, B_cyc, C_cyc, D_cyc, N, (n, m, q))


def build_ideal_cyclic(model, period):
    """Cycled system with every phase equal to the same LTI model."""
    _check_period(period)
    return build_cyclic([model] * period, period)


def cyclic_pattern_masks(period, base_dims):
    """Boolean masks of the entries allowed to be nonzero."""
    n, m, q = base_dims
    ideal = build_cyclic(
        [StateSpaceModel(
            np.ones((n, n)), np.ones((n, m)),
            np.ones((q, n)), np.ones((q, m)),
        )] * period,
        period,
    )
    return tuple(matrix != 0.0 for matrix in ideal.matrices())


@dataclass(frozen=True, eq=False)
class PhaseExtraction:
    vertex_set: VertexSet
    structure_residual: float


def extract_phase_parameters(cycled):
    """Read the N phase models out of a cycled system.

    structure_residual is the Frobenius norm of every entry outside the
    cyclic pattern, over all four matrices; 0 for ideal constructions.
    """
    n, m, q = cycled.base_dims
    N = cycled.period
    sn, sm, sq = _blocks(n, N), _blocks(m, N), _blocks(q, N)
    vertices = []
    for i in range(N):
        nxt = (i + 1) % N
        vertices.append(StateSpaceModel(
            cycled.A_cyc[sn[nxt], sn[i]],
            cycled.B_cyc[sn[nxt], sm[i]],
            cycled.C_cyc[sq[i], sn[i]],
            cycled.D_cyc[sq[i], sm[i]],
        ))

    off_pattern = 0.0
    masks = cyclic_pattern_masks(N, (n, m, q))
    for matrix, mask in zip(cycled.matrices(), masks):
        off_pattern += float(np.sum(matrix[~mask] ** 2))

    return PhaseExtraction(
        vertex_set=VertexSet(tuple(vertices), N),
        structure_residual=float(np.sqrt(off_pattern)),
    )


def block_diagonal_residual(matrix, row_size, col_size, period):
    """Frobenius norm of everything outside the N diagonal blocks."""
    masked = np.array(matrix, dtype=float)
    for i in range(period):
        masked[i * row_size:(i + 1) * row_size,
               i * col_size:(i + 1) * col_size] = 0.0
    return float(np.linalg.norm(masked))


def markov_sparsity_residual(model, period, i, j):
    """Off-block-diagonal norm of S_q^i H(i+j) S_m^j for the ideal
    cycled system of model.
    """
    if i < 0 or j < 0:
        raise DimensionError('i and j must be nonnegative')
    cycled = build_ideal_cyclic(model, period)
    H = markov_parameters(cycled.as_model(), i + j + 1)[i + j]
    S_q = cyclic_shift_matrix(model.q, period)
    S_m = cyclic_shift_matrix(model.m, period)
    product = (
        np.linalg.matrix_power(S_q, i) @ H @ np.linalg.matrix_power(S_m, j)
    )
    return block_diagonal_residual(product, model.q, model.m, period)
