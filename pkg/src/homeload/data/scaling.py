"""Min-max scaling onto [0, 1] with clamping and constant-column handling."""

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, OneToOneFeatureMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from ..exceptions import DegenerateColumn, EmptyFrame, MissingColumn, SchemaMismatch


class UnitIntervalScaler(OneToOneFeatureMixin, TransformerMixin, BaseEstimator):
    """Map each feature linearly onto [0, 1] using its training extrema.

    Unlike ``sklearn.preprocessing.MinMaxScaler`` the output of
    :meth:`transform` is always clamped to [0, 1], and constant features map to
    0.5 instead of 0.

    Parameters
    ----------
    clip : bool, default=True
        Clamp transformed values that fall outside the fitted range.

    Attributes
    ----------
    data_min_, data_max_ : ndarray of shape (n_features,)
    degenerate_ : ndarray of bool
        ``True`` where ``data_min_ == data_max_``.
    """

    def __init__(self, clip=True):
        self.clip = clip

    def fit(self, X, y=None):
        X = check_array(X, dtype=float, ensure_all_finite=True)
        self.data_min_ = X.min(axis=0)
        self.data_max_ = X.max(axis=0)
        self.degenerate_ = self.data_min_ == self.data_max_
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self)
        X = check_array(X, dtype=float, ensure_all_finite=True)
        if X.shape[1] != self.n_features_in_:
            raise SchemaMismatch(f"expected {self.n_features_in_} features, got {X.shape[1]}")
        span = np.where(self.degenerate_, 1.0, self.data_max_ - self.data_min_)
        Z = (X - self.data_min_) / span
        if self.clip:
            Z = np.clip(Z, 0.0, 1.0)
        return np.where(self.degenerate_, 0.5, Z)

    def inverse_transform(self, X):
        check_is_fitted(self)
        X = check_array(X, dtype=float)
        if np.any(self.degenerate_):
            raise DegenerateColumn(int(np.argmax(self.degenerate_)))
        return self.data_min_ + X * (self.data_max_ - self.data_min_)


@dataclass(frozen=True)
class ColumnRange:
    min: float
    max: float

    @property
    def degenerate(self):
        return self.min == self.max


class NormalizationMap(dict):
    """Column name -> :class:`ColumnRange`, in frame column order."""


def fit_minmax(frame):
    if len(frame) == 0:
        raise EmptyFrame("cannot fit normalization on an empty frame")
    lo = frame.values.min(axis=0)
    hi = frame.values.max(axis=0)
    return NormalizationMap(
        (name, ColumnRange(float(a), float(b))) for name, a, b in zip(frame.names, lo, hi)
    )


def _scaler_for(mapping, names):
    sc = UnitIntervalScaler()
    sc.data_min_ = np.array([mapping[n].min for n in names])
    sc.data_max_ = np.array([mapping[n].max for n in names])
    sc.degenerate_ = sc.data_min_ == sc.data_max_
    sc.n_features_in_ = len(names)
    return sc


def apply_minmax(frame, mapping):
    """Normalize every column of ``frame`` with ``mapping`` (clamped to [0, 1])."""
    if set(frame.names) != set(mapping):
        raise SchemaMismatch(
            f"frame columns {sorted(frame.names)} do not match map columns {sorted(mapping)}"
        )
    return frame.replace(values=_scaler_for(mapping, frame.names).transform(frame.values))


def invert_minmax(values, column, mapping):
    """Map normalized ``values`` of ``column`` back to physical units."""
    if column not in mapping:
        raise MissingColumn(column)
    rng = mapping[column]
    if rng.degenerate:
        raise DegenerateColumn(column)
    return rng.min + np.asarray(values, dtype=float) * (rng.max - rng.min)
