"""Sequential minimal optimization for the epsilon-SVR dual.

The dual is written over ``2n`` variables ``a = [alpha; alpha*]`` with signs
``s = [+1; -1]``::

    min_a  0.5 a^T Q a + p^T a
    s.t.   s^T a = 0,  0 <= a <= C
    Q_tu = s_t s_u K(t mod n, u mod n),  p = [eps - y; eps + y]

so that ``beta = alpha - alpha*`` and ``f(x) = sum_i beta_i k(x_i, x) + b``.
Each iteration picks the maximal violating pair (lowest index on ties) and
solves its two-variable subproblem in closed form, clipped to the box.

The loop is compiled with numba. Kernel rows live in a least-recently-used
cache under a byte budget; rows are computed with the same per-pair routine
as :func:`~homeload.svr.kernels.kernel_eval`, so cache size never changes
the result.
"""

from dataclasses import dataclass

import numba
import numpy as np

from .kernels import kval

TAU = 1e-12


@dataclass
class SmoResult:
    beta: np.ndarray
    bias: float
    alpha: np.ndarray
    n_iter: int
    violation: float
    objective: float
    converged: bool
    cache_hits: int = 0
    cache_misses: int = 0
    objective_trace: np.ndarray = None
    max_infeasibility: float = 0.0


@numba.njit(cache=True)
def _fetch(t, X, kind, sigma, degree, rows, slot_of, owner, stamp, clock, stats):
    """Slot holding kernel row ``t``; computes it into the LRU slot on a miss."""
    sl = slot_of[t]
    if sl >= 0:
        stats[0] += 1
    else:
        stats[1] += 1
        cap = rows.shape[0]
        sl = 0
        best = stamp[0]
        for c in range(cap):
            if owner[c] < 0:
                sl = c
                break
            if stamp[c] < best:
                best = stamp[c]
                sl = c
        if owner[sl] >= 0:
            slot_of[owner[sl]] = -1
        owner[sl] = t
        slot_of[t] = sl
        for u in range(X.shape[0]):
            rows[sl, u] = kval(kind, sigma, degree, X, t, X, u)
    stamp[sl] = clock
    return sl


@numba.njit(cache=True)
def _select(a, G, s, C):
    """Maximal violating pair over ``-s*G``; returns (i, j, gap)."""
    n2 = a.shape[0]
    i = -1
    j = -1
    gmax = -np.inf
    gmin = np.inf
    for t in range(n2):
        mg = -s[t] * G[t]
        if s[t] > 0:
            up = a[t] < C
            low = a[t] > 0
        else:
            up = a[t] > 0
            low = a[t] < C
        if up and mg > gmax:
            gmax = mg
            i = t
        if low and mg < gmin:
            gmin = mg
            j = t
    return i, j, gmax - gmin


@numba.njit(cache=True)
def _objective(a, G, p):
    acc = 0.0
    for t in range(a.shape[0]):
        acc += a[t] * (G[t] + p[t])
    return 0.5 * acc


@numba.njit(cache=True)
def _solve(X, y, kind, sigma, degree, C, eps, tol, max_iter, capacity, record):
    n = y.shape[0]
    n2 = 2 * n
    s = np.empty(n2)
    p = np.empty(n2)
    for t in range(n):
        s[t] = 1.0
        s[t + n] = -1.0
        p[t] = eps - y[t]
        p[t + n] = eps + y[t]
    a = np.zeros(n2)
    G = p.copy()
    kd = np.empty(n)
    for t in range(n):
        kd[t] = kval(kind, sigma, degree, X, t, X, t)

    cap = min(capacity, n)
    rows = np.empty((cap, n))
    slot_of = np.full(n, -1, dtype=np.int64)
    owner = np.full(cap, -1, dtype=np.int64)
    stamp = np.zeros(cap, dtype=np.int64)
    stats = np.zeros(2, dtype=np.int64)
    trace = np.empty(max_iter + 1 if record else 0)
    if record:
        trace[0] = 0.0
    infeas = 0.0

    it = 0
    clock = 0
    gap = 0.0
    while True:
        i, j, gap = _select(a, G, s, C)
        if i < 0 or j < 0 or gap <= tol or it >= max_iter:
            break
        clock += 1
        ri = _fetch(i % n, X, kind, sigma, degree, rows, slot_of, owner, stamp, clock, stats)
        clock += 1
        rj = _fetch(j % n, X, kind, sigma, degree, rows, slot_of, owner, stamp, clock, stats)
        kij = rows[ri, j % n]
        ai = a[i]
        aj = a[j]
        if s[i] != s[j]:
            quad = max(kd[i % n] + kd[j % n] + 2.0 * s[i] * s[j] * kij, TAU)
            delta = (-G[i] - G[j]) / quad
            diff = ai - aj
            ni = ai + delta
            nj = aj + delta
            if diff > 0:
                if nj < 0:
                    nj = 0.0
                    ni = diff
            elif ni < 0:
                ni = 0.0
                nj = -diff
            if diff > 0:
                if ni > C:
                    ni = C
                    nj = C - diff
            elif nj > C:
                nj = C
                ni = C + diff
        else:
            quad = max(kd[i % n] + kd[j % n] - 2.0 * kij, TAU)
            delta = (G[i] - G[j]) / quad
            total = ai + aj
            ni = ai - delta
            nj = aj + delta
            if total > C:
                if ni > C:
                    ni = C
                    nj = total - C
            elif nj < 0:
                nj = 0.0
                ni = total
            if total > C:
                if nj > C:
                    nj = C
                    ni = total - C
            elif ni < 0:
                ni = 0.0
                nj = total
        a[i] = ni
        a[j] = nj
        ci = s[i] * (ni - ai)
        cj = s[j] * (nj - aj)
        for t in range(n2):
            u = t % n
            G[t] += s[t] * (ci * rows[ri, u] + cj * rows[rj, u])
        it += 1
        if record:
            trace[it] = -_objective(a, G, p)
            eq = 0.0
            for t in range(n2):
                eq += s[t] * a[t]
                v = max(-a[t], a[t] - C)
                if v > infeas:
                    infeas = v
            if abs(eq) > infeas:
                infeas = abs(eq)

    # bias: mean of -s*G over free variables, else the midpoint of the bounds
    nfree = 0
    acc = 0.0
    hi = -np.inf
    lo = np.inf
    for t in range(n2):
        mg = -s[t] * G[t]
        if 0 < a[t] < C:
            nfree += 1
            acc += mg
        if (s[t] > 0 and a[t] < C) or (s[t] < 0 and a[t] > 0):
            hi = max(hi, mg)
        if (s[t] > 0 and a[t] > 0) or (s[t] < 0 and a[t] < C):
            lo = min(lo, mg)
    if nfree > 0:
        bias = acc / nfree
    elif np.isfinite(hi) and np.isfinite(lo):
        bias = 0.5 * (hi + lo)
    elif np.isfinite(hi):
        bias = hi
    else:
        bias = lo
    obj = -_objective(a, G, p)
    return a, bias, it, max(gap, 0.0), obj, stats, trace[: it + 1], infeas


def solve(spec, X, y, C=1.0, epsilon=0.1, tol=1e-3, max_iter=100_000,
          cache_bytes=64 * 2**20, record=False):
    """Run SMO and return an :class:`SmoResult`.

    With ``record=True`` the dual objective (in maximization form) after
    every pair update is kept in ``objective_trace`` and the worst box or
    equality violation seen along the way in ``max_infeasibility``.
    """
    X = np.ascontiguousarray(X, dtype=float)
    y = np.ascontiguousarray(y, dtype=float)
    n = len(y)
    capacity = max(2, int(cache_bytes) // (8 * n))
    a, bias, it, gap, obj, stats, trace, infeas = _solve(
        X, y, spec.code, float(spec.sigma), int(spec.degree), float(C), float(epsilon),
        float(tol), int(max_iter), capacity, bool(record),
    )
    return SmoResult(
        beta=a[:n] - a[n:],
        bias=float(bias),
        alpha=a,
        n_iter=int(it),
        violation=float(gap),
        objective=float(obj),
        converged=bool(gap <= tol),
        cache_hits=int(stats[0]),
        cache_misses=int(stats[1]),
        objective_trace=trace if record else None,
        max_infeasibility=float(infeas),
    )
