"""Error metrics and wall-clock timing."""

import time
from dataclasses import dataclass

import numpy as np

from ..exceptions import EmptyInput, LengthMismatch


def _pair(y, yhat):
    y = np.asarray(y, dtype=float).ravel()
    yhat = np.asarray(yhat, dtype=float).ravel()
    if len(y) != len(yhat):
        raise LengthMismatch(f"{len(y)} targets vs {len(yhat)} predictions")
    if len(y) == 0:
        raise EmptyInput("metrics need at least one value")
    return y, yhat


def mae(y, yhat):
    y, yhat = _pair(y, yhat)
    return float(np.mean(np.abs(y - yhat)))


def rmse(y, yhat):
    y, yhat = _pair(y, yhat)
    r = np.abs(y - yhat)
    scale = float(r.max())
    if 0.0 < scale < 1e-150 or scale > 1e150:
        # squares would underflow or overflow; rescale by the largest residual
        return scale * float(np.sqrt(np.mean((r / scale) ** 2)))
    return float(np.sqrt(np.mean(r**2)))


@dataclass(frozen=True)
class MetricPair:
    mae: float
    rmse: float

    @classmethod
    def of(cls, y, yhat):
        return cls(mae(y, yhat), rmse(y, yhat))


def time_run(thunk):
    """Call ``thunk()`` and return ``(result, elapsed_seconds)`` on the monotonic clock."""
    t0 = time.perf_counter()
    result = thunk()
    return result, time.perf_counter() - t0
