"""Model quality measures."""
from dataclasses import dataclass

import numpy as np

from sysid.exceptions import (
    DegenerateReferenceError,
    DimensionError,
    SignalLengthError,
)


@dataclass(frozen=True)
class FitReport:
    """FIT percentage per output channel and their arithmetic mean."""
    per_output_fit: tuple
    mean_fit: float


def _as_channels(values, name):
    arr = np.array(values, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise DimensionError(f'{name} must be a sequence of vectors')
    return arr


def fit(y_true, y_model):
    """FIT = (1 - ||y - y_hat|| / ||y - mean(y)||) * 100 per channel.

    100 is a perfect match, 0 is no better than the channel mean and
    the score is unbounded below.
    """
    truth = _as_channels(y_true, 'y_true')
    model = _as_channels(y_model, 'y_model')
    if truth.shape != model.shape:
        raise DimensionError(
            f'y_true {truth.shape} and y_model {model.shape} differ'
        )
    if truth.shape[0] < 2:
        raise SignalLengthError('FIT needs at least two samples')

    scores = []
    for channel in range(truth.shape[1]):
        y = truth[:, channel]
        spread = np.linalg.norm(y - y.mean())
        if spread == 0.0:
            raise DegenerateReferenceError(
                f'output channel {channel} is constant'
            )
        residual = np.linalg.norm(y - model[:, channel])
        scores.append(float((1.0 - residual / spread) * 100.0))
    return FitReport(tuple(scores), float(np.mean(scores)))


def param_error(truth, estimate):
    """Sum of squared Frobenius norms of the four matrix differences."""
    if truth.dims != estimate.dims:
        raise DimensionError(
            f'cannot compare a {truth.dims} model with a {estimate.dims} one'
        )
    return float(sum(
        np.sum((mine - theirs) ** 2)
        for mine, theirs in zip(truth.matrices(), estimate.matrices())
    ))


def vertex_errors(truth, vertices):
    return [param_error(truth, vertex) for vertex in vertices]


def total_vertex_error(truth, vertices):
    return float(sum(vertex_errors(truth, vertices)))
