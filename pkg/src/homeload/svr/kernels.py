"""Kernel functions for support vector regression.

``linear``     <x, y>
``rbf``        exp(-sigma * ||x - y||^2)
``anova_rbf``  (sum_d exp(-sigma * (x_d - y_d)^2)) ** degree

Every evaluation path (scalar, row, block, and the SMO row cache) calls the
same compiled per-pair routine with a fixed, sequential summation order, so a
cached kernel row is bit-identical to evaluating its entries one at a time.
"""

import math
from dataclasses import dataclass

import numba
import numpy as np

from ..exceptions import DimensionMismatch

KINDS = ("linear", "rbf", "anova_rbf")


@dataclass(frozen=True)
class KernelSpec:
    kind: str = "anova_rbf"
    sigma: float = 1.0
    degree: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kernel {self.kind!r}; expected one of {KINDS}")
        if not self.sigma > 0:
            raise ValueError("sigma must be > 0")
        if int(self.degree) != self.degree or self.degree < 1:
            raise ValueError("degree must be a positive integer")

    @property
    def code(self):
        return KINDS.index(self.kind)


@numba.njit(cache=True)
def kval(kind, sigma, degree, A, i, B, j):
    acc = 0.0
    if kind == 0:
        for d in range(A.shape[1]):
            acc += A[i, d] * B[j, d]
        return acc
    if kind == 1:
        for d in range(A.shape[1]):
            t = A[i, d] - B[j, d]
            acc += t * t
        return math.exp(-sigma * acc)
    for d in range(A.shape[1]):
        t = A[i, d] - B[j, d]
        acc += math.exp(-sigma * (t * t))
    out = acc
    for _ in range(degree - 1):
        out *= acc
    return out


@numba.njit(cache=True)
def _block(kind, sigma, degree, A, B):
    out = np.empty((A.shape[0], B.shape[0]))
    for i in range(A.shape[0]):
        for j in range(B.shape[0]):
            out[i, j] = kval(kind, sigma, degree, A, i, B, j)
    return out


def _as2d(a):
    return np.ascontiguousarray(np.atleast_2d(np.asarray(a, dtype=float)))


def kernel_block(spec, A, B):
    """Kernel matrix ``K[i, j] = k(A[i], B[j])``."""
    A, B = _as2d(A), _as2d(B)
    if A.shape[1] != B.shape[1]:
        raise DimensionMismatch(f"dimension {A.shape[1]} vs {B.shape[1]}")
    return _block(spec.code, float(spec.sigma), int(spec.degree), A, B)


def kernel_row(spec, X, x):
    """``k(x, X[j])`` for every row ``j`` of ``X``."""
    return kernel_block(spec, np.asarray(x, dtype=float)[None, :], X)[0]


def kernel_eval(spec, x, y):
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.shape != y.shape or x.size == 0:
        raise DimensionMismatch(f"dimension {x.size} vs {y.size}")
    return float(kernel_block(spec, x[None, :], y[None, :])[0, 0])


def kernel_diag(spec, X):
    """``k(x, x)`` for every row."""
    X = _as2d(X)
    return np.array([kval(spec.code, float(spec.sigma), int(spec.degree), X, i, X, i) for i in range(len(X))])
