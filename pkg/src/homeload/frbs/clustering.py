"""Subtractive clustering and fuzzy C-means refinement."""

from dataclasses import dataclass

import numpy as np

from ..exceptions import EmptyData, FewerPointsThanClusters

_CHUNK = 1 << 22


@dataclass(frozen=True)
class SbcParams:
    radius: float = 0.5
    squash: float = 1.5
    accept_ratio: float = 0.5
    reject_ratio: float = 0.15

    def __post_init__(self):
        if not self.radius > 0 or not self.squash > 0:
            raise ValueError("radius and squash must be > 0")
        if not 0 < self.accept_ratio <= 1 or not 0 <= self.reject_ratio < 1:
            raise ValueError("accept_ratio must be in (0, 1] and reject_ratio in [0, 1)")
        if not self.reject_ratio < self.accept_ratio:
            raise ValueError("reject_ratio must be below accept_ratio")


@dataclass(frozen=True)
class FcmParams:
    m: float = 2.0
    tol: float = 1e-5
    max_iter: int = 100

    def __post_init__(self):
        if not self.m > 1:
            raise ValueError("fuzzifier m must be > 1")
        if not self.tol > 0 or self.max_iter < 1:
            raise ValueError("tol must be > 0 and max_iter >= 1")


@dataclass(frozen=True, eq=False)
class ClusterSet:
    centers: np.ndarray
    potentials: np.ndarray
    indices: np.ndarray


def _sqdist_to(X, x):
    return ((X - x) ** 2).sum(axis=1)


def potentials(X, radius):
    """Mountain potential ``P_i = sum_j exp(-alpha ||x_i - x_j||^2)``, ``alpha = 4 / r^2``.

    Rows are processed in blocks; each row's sum runs over ``j`` in order, so
    the result does not depend on the block size.
    """
    alpha = 4.0 / radius**2
    n = len(X)
    step = max(1, _CHUNK // max(1, n * X.shape[1]))
    P = np.empty(n)
    for s in range(0, n, step):
        blk = X[s : s + step]
        d2 = ((blk[:, None, :] - X[None, :, :]) ** 2).sum(axis=2)
        P[s : s + step] = np.exp(-alpha * d2).sum(axis=1)
    return P


def subtractive_cluster(X, params=SbcParams()):
    """Chiu's subtractive clustering.

    Every row is a candidate center. After a center with potential ``P*`` is
    chosen, potentials are revised by ``P*·exp(-beta ||x - x*||^2)`` with
    ``beta = 4 / (squash·radius)^2``. A candidate above ``accept_ratio·P1`` is
    accepted, one below ``reject_ratio·P1`` stops the search, and one in
    between is accepted only if ``d_min/radius + P/P1 >= 1``; otherwise its
    potential is zeroed and the next candidate is tried.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or len(X) == 0:
        raise EmptyData("subtractive clustering needs at least one row")
    beta = 4.0 / (params.squash * params.radius) ** 2
    P = potentials(X, params.radius)
    k = int(np.argmax(P))
    p1 = P[k]
    chosen, pots = [k], [p1]
    P = P - p1 * np.exp(-beta * _sqdist_to(X, X[k]))
    while True:
        k = int(np.argmax(P))
        pk = P[k]
        if pk <= 0 or pk < params.reject_ratio * p1:
            break
        if pk <= params.accept_ratio * p1:
            dmin = np.sqrt(_sqdist_to(X[chosen], X[k]).min())
            if dmin / params.radius + pk / p1 < 1.0:
                P[k] = 0.0
                continue
        chosen.append(k)
        pots.append(pk)
        P = P - pk * np.exp(-beta * _sqdist_to(X, X[k]))
    idx = np.array(chosen)
    return ClusterSet(X[idx].copy(), np.array(pots), idx)


def _memberships(d2, m):
    """FCM memberships from squared distances of shape (n, c)."""
    zero = d2 == 0.0
    # ratios to the row minimum keep the powers in (0, 1] for any distance scale
    dmin = d2.min(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = (d2 / dmin) ** (-1.0 / (m - 1.0))
        u = inv / inv.sum(axis=1, keepdims=True)
    hit = zero.any(axis=1)
    if np.any(hit):
        # a point sitting on a center belongs wholly to the first such center
        u[hit] = 0.0
        u[hit, np.argmax(zero[hit], axis=1)] = 1.0
    return u


def _sqdist(X, V):
    return ((X[:, None, :] - V[None, :, :]) ** 2).sum(axis=2)


def fcm_refine(X, init, params=FcmParams()):
    """Refine fixed-count centers by fuzzy C-means alternation.

    Parameters
    ----------
    X : ndarray of shape (n, D)
    init : ClusterSet or ndarray of shape (c, D)
        Starting centers; ``c`` stays fixed.

    Returns
    -------
    centers : ndarray of shape (c, D)
    memberships : ndarray of shape (n, c)
        Rows sum to one.
    objective_trace : ndarray
        ``J = sum_ik u_ik^m ||x_k - v_i||^2`` after each membership+center update.
    """
    X = np.asarray(X, dtype=float)
    V = np.array(getattr(init, "centers", init), dtype=float)
    if X.ndim != 2 or len(X) == 0:
        raise EmptyData("FCM needs at least one row")
    if len(V) < 1:
        raise EmptyData("FCM needs at least one initial center")
    if len(X) < len(V):
        raise FewerPointsThanClusters(f"{len(X)} points for {len(V)} clusters")
    m = params.m
    trace = []
    U = None
    for _ in range(params.max_iter):
        U = _memberships(_sqdist(X, V), m)
        W = U**m
        mass = W.sum(axis=0)
        V_new = np.where(mass[:, None] > 0, (W.T @ X) / np.where(mass > 0, mass, 1.0)[:, None], V)
        trace.append(float((W * _sqdist(X, V_new)).sum()))
        shift = np.abs(V_new - V).max()
        V = V_new
        if shift < params.tol:
            break
    return V, U, np.array(trace)
