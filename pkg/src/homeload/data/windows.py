"""Forecast-term definitions, random window sampling and learning-set builders."""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .._rng import make_rng
from ..exceptions import FrameTooShort, TooShortForHorizon, TooShortForLookback
from .frame import resample_mean


@dataclass(frozen=True)
class TermConfig:
    """Sampling and window sizes for one forecasting term.

    ``train_len`` rows feed the SVR and fuzzy models; recurrent models split the
    same rows into ``train_len - verification_len`` training rows followed by
    ``verification_len`` verification rows.
    """

    term: str
    sampling_minutes: int
    train_len: int
    verification_len: int
    test_len: int
    window_count: int = 10

    def __post_init__(self):
        if self.sampling_minutes < 1 or self.train_len < 2 or self.test_len < 1:
            raise ValueError(f"invalid term configuration {self!r}")
        if not 0 <= self.verification_len < self.train_len:
            raise ValueError("verification_len must be in [0, train_len)")
        if self.window_count < 1:
            raise ValueError("window_count must be >= 1")

    @property
    def window_len(self):
        return self.train_len + self.test_len

    @property
    def verification_fraction(self):
        return self.verification_len / self.train_len


TERM_ORDER = ("VSTELF", "STELF", "MTELF")

DEFAULT_TERMS = {
    "VSTELF": TermConfig("VSTELF", 1, 60, 30, 10),
    "STELF": TermConfig("STELF", 1, 3000, 1500, 3000),
    "MTELF": TermConfig("MTELF", 10, 4000, 2000, 4000),
}


class Window(NamedTuple):
    train: object
    test: object
    offset: int


def sample_windows(frame, cfg, seed):
    """Draw ``cfg.window_count`` contiguous train/test windows.

    The frame is first resampled to ``cfg.sampling_minutes``. Window ``i``
    draws its start offset uniformly from all valid offsets using stream ``i``
    of ``seed``; windows may overlap.
    """
    frame = resample_mean(frame, cfg.sampling_minutes)
    L = cfg.window_len
    if len(frame) < L:
        raise FrameTooShort(
            f"{cfg.term} needs {L} rows at {cfg.sampling_minutes} min, frame has {len(frame)}"
        )
    out = []
    for i in range(cfg.window_count):
        off = int(make_rng(seed, i).integers(0, len(frame) - L + 1))
        out.append(
            Window(frame.rows(off, off + cfg.train_len), frame.rows(off + cfg.train_len, off + L), off)
        )
    return out


@dataclass(frozen=True)
class SupervisedSet:
    """Row-feature learning set: ``X[t]`` holds inputs at ``t``, ``y[t]`` the target at ``t + horizon``."""

    X: np.ndarray
    y: np.ndarray
    horizon: int
    attribute_names: tuple

    def __post_init__(self):
        if len(self.X) != len(self.y):
            raise ValueError("X and y lengths differ")


@dataclass(frozen=True)
class SequenceSet:
    """Sequence learning set of shape ``(samples, lookback, attributes)``."""

    sequences: np.ndarray
    y: np.ndarray
    lookback: int

    def __post_init__(self):
        if len(self.sequences) != len(self.y):
            raise ValueError("sequences and y lengths differ")
        if self.lookback < 1:
            raise ValueError("lookback must be >= 1")

    def __len__(self):
        return len(self.y)


def _supervised(frame, horizon):
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if len(frame) <= horizon:
        raise TooShortForHorizon(f"{len(frame)} rows cannot support horizon {horizon}")
    return SupervisedSet(frame.inputs[:-horizon], frame.target[horizon:], horizon, frame.input_names)


def make_supervised(train, test, horizon=1):
    """Align inputs at ``t`` with target at ``t + horizon`` in each split separately."""
    return _supervised(train, horizon), _supervised(test, horizon)


def build_sequences(X, y, lookback, horizon=1, first_label=None):
    """Sliding sequences over one contiguous block.

    Sample ``k`` ends at row ``t = first_label + k`` (default
    ``lookback - 1``) and is labelled with ``y[t + horizon]``.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if lookback < 1 or horizon < 1:
        raise ValueError("lookback and horizon must be >= 1")
    start = lookback - 1 if first_label is None else first_label
    if start < lookback - 1:
        raise TooShortForLookback("not enough context rows before the first label")
    count = len(X) - horizon - start
    if count < 1:
        raise TooShortForLookback(
            f"{len(X)} rows cannot hold lookback {lookback} with horizon {horizon}"
        )
    # windows[s] covers rows s .. s+lookback-1
    windows = sliding_window_view(X, lookback, axis=0).transpose(0, 2, 1)
    seqs = windows[start - lookback + 1 : start - lookback + 1 + count]
    return SequenceSet(np.ascontiguousarray(seqs), y[start + horizon : start + horizon + count].copy(), lookback)


def make_sequences(train, verification_fraction, test, lookback, horizon=1):
    """Training, verification and test sequence sets for recurrent models.

    The training window is cut into two contiguous parts (the last
    ``verification_fraction`` of rows is verification); each part builds its
    sequences on its own rows only. Test sequences may reach back into the
    last ``lookback - 1`` training rows for context, so the test set has the
    same ``len(test) - horizon`` labels as :func:`make_supervised`.
    """
    n = len(train)
    n_ver = int(round(n * verification_fraction))
    if not 0 < n_ver < n:
        raise ValueError("verification_fraction must leave both parts non-empty")
    if len(test) <= horizon:
        raise TooShortForHorizon(f"{len(test)} test rows cannot support horizon {horizon}")
    Xtr, ytr = train.inputs, train.target
    fit = build_sequences(Xtr[: n - n_ver], ytr[: n - n_ver], lookback, horizon)
    ver = build_sequences(Xtr[n - n_ver :], ytr[n - n_ver :], lookback, horizon)
    ctx = lookback - 1
    if ctx > n:
        raise TooShortForLookback("training window shorter than the lookback context")
    Xte = np.vstack([Xtr[n - ctx :], test.inputs])
    yte = np.concatenate([ytr[n - ctx :], test.target])
    tst = build_sequences(Xte, yte, lookback, horizon, first_label=ctx)
    return fit, ver, tst
