"""Polytopic model over a vertex set.

    A(w) = sum_i w_i A_i   (likewise B, C, D)

with w on the standard simplex: w_i >= 0 and sum w_i = 1.
"""
from dataclasses import dataclass

import numpy as np

from sysid.cyclic import VertexSet
from sysid.exceptions import DimensionError, SimplexError
from sysid.statespace import StateSpaceModel

# Tolerance used to accept weights as lying on the simplex
SIMPLEX_TOLERANCE = 1e-10
# Slack allowed on negative entries left over by projection
NEGATIVE_SLACK = 1e-12


@dataclass(frozen=True)
class SimplexCheck:
    valid: bool
    violation: float
    total: float

    def __bool__(self):
        return self.valid


def validate_simplex(weights, tolerance=SIMPLEX_TOLERANCE):
    """Check that weights lie on the simplex.

    The violation is the larger of the most negative entry (as a
    positive number) and the distance of the sum from 1.
    """
    arr = np.asarray(weights, dtype=float).reshape(-1)
    if arr.size == 0:
        return SimplexCheck(False, 1.0, 0.0)
    total = float(arr.sum())
    negativity = max(0.0, -float(arr.min()))
    deviation = abs(total - 1.0)
    valid = negativity <= tolerance and deviation <= tolerance
    return SimplexCheck(valid, max(negativity, deviation), total)


@dataclass(frozen=True, eq=False)
class SimplexWeights:
    weights: np.ndarray

    def __post_init__(self):
        arr = np.array(self.weights, dtype=float).reshape(-1)
        check = validate_simplex(arr)
        if arr.size == 0 or float(arr.min()) < -NEGATIVE_SLACK:
            raise SimplexError(f'weights must be nonnegative, got {arr}')
        if not check.valid:
            raise SimplexError(
                f'weights must sum to 1, got {check.total!r}'
            )
        arr.setflags(write=False)
        object.__setattr__(self, 'weights', arr)

    def __len__(self):
        return self.weights.shape[0]

    def __iter__(self):
        return iter(self.weights.tolist())

    def __getitem__(self, index):
        return float(self.weights[index])

    def tolist(self):
        return self.weights.tolist()


def uniform_weights(count):
    if count < 1:
        raise DimensionError(f'count must be positive, got {count}')
    weights = np.full(count, 1.0 / count)
    # Push the rounding residue into the last entry so the sum is 1
    weights[-1] = 1.0 - weights[:-1].sum()
    return SimplexWeights(weights)


@dataclass(frozen=True, eq=False)
class PolytopeModel:
    vertex_set: VertexSet

    @property
    def period(self):
        return len(self.vertex_set)

    @property
    def dims(self):
        return self.vertex_set.dims

    def evaluate(self, weights):
        """Entrywise convex combination of the vertex matrices."""
        if not isinstance(weights, SimplexWeights):
            weights = SimplexWeights(weights)
        if len(weights) != self.period:
            raise DimensionError(
                f'{len(weights)} weights for {self.period} vertices'
            )
        w = weights.weights
        stacks = zip(*(vertex.matrices() for vertex in self.vertex_set))
        combined = [
            np.tensordot(w, np.stack(stack), axes=1) for stack in stacks
        ]
        return StateSpaceModel(*combined)

    def to_dict(self, **metadata):
        """Serializable listing of the vertices plus any metadata."""
        n, m, q = self.dims
        data = dict(metadata)
        data.update({
            'period': self.period,
            'n': n,
            'm': m,
            'q': q,
            'vertices': [vertex.to_dict() for vertex in self.vertex_set],
        })
        return data
