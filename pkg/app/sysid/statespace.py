"""Discrete-time LTI state-space models, noisy simulation and canonical forms.

    x(k+1) = A x(k) + B u(k) + d_u(k)
    y(k)   = C x(k) + D u(k) + d_y(k)

Models and signal records are immutable once built: their arrays are
flagged read-only so they can be shared between concurrent trials.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.signal

from sysid.exceptions import (
    DimensionError,
    IdentificationError,
    SignalLengthError,
    SingularTransformError,
    UnsupportedModelError,
)

logger = logging.getLogger(__name__)

# Singular values below RANK_TOLERANCE * largest count as zero
RANK_TOLERANCE = 1e-8


def as_matrix(value, name):
    """Return a read-only 2-D float copy of value."""
    arr = np.array(value, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2:
        raise DimensionError(
            f'{name} must be a 2-D matrix, got shape {arr.shape}'
        )
    arr.setflags(write=False)
    return arr


def as_signal(values, dim, name):
    """Return a (length, dim) float copy of a sequence of dim-vectors.

    A flat sequence is accepted for scalar signals.
    """
    arr = np.array(values, dtype=float)
    if arr.ndim == 1 and dim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise DimensionError(
            f'{name} must be a sequence of {dim}-vectors, '
            f'got shape {arr.shape}'
        )
    return arr


def matrix_rank(matrix, tolerance=RANK_TOLERANCE):
    """Numerical rank relative to the largest singular value."""
    matrix = np.atleast_2d(matrix)
    if matrix.size == 0:
        return 0
    singular_values = scipy.linalg.svd(matrix, compute_uv=False)
    if singular_values[0] == 0.0:
        return 0
    return int(np.sum(singular_values > tolerance * singular_values[0]))


@dataclass(frozen=True, eq=False)
class StateSpaceModel:
    """(A, B, C, D) with n states, m inputs and q outputs.

    D defaults to zeros. Matrices are validated for consistent
    dimensions and finite entries.
    """
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray = None

    def __post_init__(self):
        A = as_matrix(self.A, 'A')
        B = as_matrix(self.B, 'B')
        C = as_matrix(self.C, 'C')
        n = A.shape[0]
        if n < 1 or A.shape != (n, n):
            raise DimensionError(f'A must be square, got shape {A.shape}')
        if B.shape[0] != n or B.shape[1] < 1:
            raise DimensionError(
                f'B shape {B.shape} inconsistent with {n} states'
            )
        if C.shape[1] != n or C.shape[0] < 1:
            raise DimensionError(
                f'C shape {C.shape} inconsistent with {n} states'
            )
        m, q = B.shape[1], C.shape[0]
        if self.D is None:
            D = np.zeros((q, m))
            D.setflags(write=False)
        else:
            D = as_matrix(self.D, 'D')
        if D.shape != (q, m):
            raise DimensionError(
                f'D shape {D.shape} inconsistent with {q} outputs '
                f'and {m} inputs'
            )
        for name, matrix in (('A', A), ('B', B), ('C', C), ('D', D)):
            if not np.all(np.isfinite(matrix)):
                raise IdentificationError(f'{name} has non-finite entries')

        object.__setattr__(self, 'A', A)
        object.__setattr__(self, 'B', B)
        object.__setattr__(self, 'C', C)
        object.__setattr__(self, 'D', D)

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def m(self):
        return self.B.shape[1]

    @property
    def q(self):
        return self.C.shape[0]

    @property
    def dims(self):
        return self.n, self.m, self.q

    def matrices(self):
        return self.A, self.B, self.C, self.D

    def allclose(self, other, atol=1e-10):
        """Entrywise comparison of all four matrices."""
        if self.dims != other.dims:
            return False
        return all(
            np.allclose(mine, theirs, rtol=0.0, atol=atol)
            for mine, theirs in zip(self.matrices(), other.matrices())
        )

    def to_dict(self):
        return {
            'A': self.A.tolist(),
            'B': self.B.tolist(),
            'C': self.C.tolist(),
            'D': self.D.tolist(),
            'n': self.n,
            'm': self.m,
            'q': self.q,
        }

    @classmethod
    def from_dict(cls, data):
        model = cls(data['A'], data['B'], data['C'], data.get('D'))
        for key in ('n', 'm', 'q'):
            if key in data and data[key] != getattr(model, key):
                raise DimensionError(
                    f'declared {key}={data[key]} does not match the '
                    f'matrices ({getattr(model, key)})'
                )
        return model


@dataclass(frozen=True, eq=False)
class SignalRecord:
    """Paired input/output samples, one row per time step."""
    inputs: np.ndarray
    outputs: np.ndarray

    def __post_init__(self):
        inputs = np.array(self.inputs, dtype=float)
        outputs = np.array(self.outputs, dtype=float)
        if inputs.ndim == 1:
            inputs = inputs.reshape(-1, 1)
        if outputs.ndim == 1:
            outputs = outputs.reshape(-1, 1)
        if inputs.ndim != 2 or outputs.ndim != 2:
            raise DimensionError('signals must be sequences of vectors')
        if inputs.shape[0] != outputs.shape[0]:
            raise DimensionError(
                f'inputs ({inputs.shape[0]} samples) and outputs '
                f'({outputs.shape[0]} samples) differ in length'
            )
        inputs.setflags(write=False)
        outputs.setflags(write=False)
        object.__setattr__(self, 'inputs', inputs)
        object.__setattr__(self, 'outputs', outputs)

    @property
    def length(self):
        return self.inputs.shape[0]

    @property
    def input_dim(self):
        return self.inputs.shape[1]

    @property
    def output_dim(self):
        return self.outputs.shape[1]


@dataclass(frozen=True)
class NoiseSpec:
    """i.i.d. Gaussian noise drawn from a seeded PCG64 generator.

    std_dev = 0 draws nothing: every sample equals the mean.
    """
    mean: float = 0.0
    std_dev: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not self.std_dev >= 0.0:
            raise IdentificationError(
                f'std_dev must be nonnegative, got {self.std_dev}'
            )
        if self.seed < 0:
            raise IdentificationError(
                f'seed must be nonnegative, got {self.seed}'
            )

    def sample(self, length, dim):
        if self.std_dev == 0.0:
            return np.full((length, dim), float(self.mean))
        # numpy's Generator(PCG64) with the ziggurat normal sampler
        rng = np.random.default_rng(self.seed)
        return self.mean + self.std_dev * rng.standard_normal((length, dim))


def generate_gaussian_signal(dim, length, mean=0.0, std_dev=1.0, seed=0):
    """(length, dim) array of i.i.d. N(mean, std_dev^2) samples."""
    if length < 1:
        raise SignalLengthError(f'length must be positive, got {length}')
    if dim < 1:
        raise DimensionError(f'dim must be positive, got {dim}')
    return NoiseSpec(mean=mean, std_dev=std_dev, seed=seed).sample(
        length, dim
    )


def _initial_state(model, x0):
    if x0 is None:
        return np.zeros(model.n)
    x = np.array(x0, dtype=float).reshape(-1)
    if x.shape[0] != model.n:
        raise DimensionError(
            f'x0 has {x.shape[0]} entries, model has {model.n} states'
        )
    return x


def simulate(model, inputs, process_noise=None, observation_noise=None,
             x0=None):
    """Simulate the model step by step, with optional Gaussian noise.

    Returns a SignalRecord holding the inputs and the (noisy) outputs.
    """
    u = as_signal(inputs, model.m, 'inputs')
    length = u.shape[0]
    x = _initial_state(model, x0)
    A, B, C, D = model.matrices()

    drive = u @ B.T
    if process_noise is not None:
        drive = drive + process_noise.sample(length, model.n)
    feed = u @ D.T
    if observation_noise is not None:
        feed = feed + observation_noise.sample(length, model.q)

    y = np.empty((length, model.q))
    for k in range(length):
        y[k] = C @ x
        x = A @ x + drive[k]
    return SignalRecord(u, y + feed)


def simulate_noise_free(model, inputs):
    """Zero-state, noise-free output via per-channel transfer functions.

    Much faster than simulate() for long records; used where many
    candidate models are simulated on the same input. Unstable models
    may produce non-finite outputs.
    """
    u = as_signal(inputs, model.m, 'inputs')
    A, B, C, D = model.matrices()
    y = np.zeros((u.shape[0], model.q))
    with np.errstate(over='ignore', invalid='ignore'):
        for j in range(model.m):
            num, den = scipy.signal.ss2tf(A, B, C, D, input=j)
            for i in range(model.q):
                y[:, i] += scipy.signal.lfilter(num[i], den, u[:, j])
    return y


def markov_parameters(model, count):
    """[D, CB, CAB, ..., C A^(count-2) B]"""
    if count < 1:
        raise IdentificationError(f'count must be positive, got {count}')
    A, B, C, D = model.matrices()
    params = [np.array(D)]
    reach = np.array(B)
    for _ in range(1, count):
        params.append(C @ reach)
        reach = A @ reach
    return params


def controllability_matrix(A, B, depth=None):
    """[B, AB, ..., A^(depth-1) B], depth defaults to n."""
    depth = A.shape[0] if depth is None else depth
    blocks = [np.array(B, dtype=float)]
    for _ in range(1, depth):
        blocks.append(A @ blocks[-1])
    return np.hstack(blocks)


def observability_matrix(A, C, depth=None):
    """[C; CA; ...; C A^(depth-1)], depth defaults to n."""
    depth = A.shape[0] if depth is None else depth
    blocks = [np.array(C, dtype=float)]
    for _ in range(1, depth):
        blocks.append(blocks[-1] @ A)
    return np.vstack(blocks)


@dataclass(frozen=True)
class ReachabilityReport:
    controllable: bool
    observable: bool
    controllability_rank: int
    observability_rank: int


def check_controllability_observability(model, tolerance=RANK_TOLERANCE):
    n = model.n
    ctrb_rank = matrix_rank(
        controllability_matrix(model.A, model.B), tolerance
    )
    obsv_rank = matrix_rank(
        observability_matrix(model.A, model.C), tolerance
    )
    return ReachabilityReport(
        controllable=ctrb_rank == n,
        observable=obsv_rank == n,
        controllability_rank=ctrb_rank,
        observability_rank=obsv_rank,
    )


def companion_pattern(n):
    """Pinned part of the companion A: ones on the first subdiagonal."""
    return np.eye(n, k=-1)


def to_controllable_companion(model, tolerance=RANK_TOLERANCE):
    """Similarity transform to B = e1, ones on the subdiagonal of A and
    the characteristic coefficients in the last column of A.

    The transform is the controllability matrix itself:
    A W = W A_c because A^n B is a combination of the columns of W.
    """
    if model.m != 1:
        raise UnsupportedModelError(
            f'companion form needs a single input, model has m={model.m}'
        )
    A, B, C, D = model.matrices()
    n = model.n
    W = controllability_matrix(A, B)
    if matrix_rank(W, tolerance) < n:
        raise SingularTransformError(
            '(A, B) is not controllable',
            condition_estimate=float(np.linalg.cond(W)),
        )

    last_column = scipy.linalg.solve(W, A @ W[:, -1])
    A_c = companion_pattern(n)
    A_c[:, -1] = last_column
    B_c = np.zeros((n, 1))
    B_c[0, 0] = 1.0
    return StateSpaceModel(A_c, B_c, C @ W, D)
