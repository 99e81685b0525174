"""Epsilon-SVR models: training, prediction, KKT diagnostics and persistence."""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from ..exceptions import DegenerateData, DimensionMismatch, NonFiniteValue
from . import smo
from .kernels import KernelSpec, kernel_block

MAGIC = "SVR1"


@dataclass(frozen=True)
class SvrHyperParams:
    C: float = 1.0
    epsilon: float = 0.005
    tol: float = 1e-3
    max_iter: int = 1_000_000
    cache_mib: float = 64.0

    def __post_init__(self):
        if not self.C > 0:
            raise ValueError("C must be > 0")
        if not self.epsilon >= 0:
            raise ValueError("epsilon must be >= 0")
        if not self.tol > 0:
            raise ValueError("tol must be > 0")
        if self.max_iter < 0:
            raise ValueError("max_iter must be >= 0")


@dataclass(frozen=True, eq=False)
class SvrModel:
    """Trained SVR: ``f(x) = sum_i beta_i k(sv_i, x) + bias``.

    ``support`` holds the training-row indices of the support vectors and
    ``n_train`` the training-set size, so full-length dual vectors can be
    rebuilt for diagnostics.
    """

    support_vectors: np.ndarray
    beta: np.ndarray
    bias: float
    kernel: KernelSpec
    hyper: SvrHyperParams = SvrHyperParams()
    support: np.ndarray = None
    n_train: int = 0
    n_iter: int = 0
    violation: float = 0.0
    objective: float = 0.0
    converged: bool = True
    extra: dict = field(default_factory=dict, repr=False)

    @property
    def n_features(self):
        return self.support_vectors.shape[1]

    def full_beta(self):
        out = np.zeros(self.n_train)
        out[self.support] = self.beta
        return out


def _check_finite(*arrays):
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise NonFiniteValue("inputs contain NaN or infinity")


def train_svr(data, hyper=SvrHyperParams(), kernel=KernelSpec(), seed=0, record=False):
    """Fit an epsilon-SVR to a :class:`~homeload.data.SupervisedSet` with SMO.

    The working-set rule is deterministic, so ``seed`` has no effect; it is
    accepted so every model trainer shares one signature. ``record=True``
    keeps the solver's objective trace and feasibility check in
    ``model.extra["solver"]``.
    """
    X = np.asarray(data.X, dtype=float)
    y = np.asarray(data.y, dtype=float)
    if X.ndim != 2 or len(X) != len(y):
        raise DimensionMismatch("X must be 2-D with one row per target")
    if len(y) < 2:
        raise DegenerateData("SVR needs at least two samples")
    _check_finite(X, y)
    res = smo.solve(
        kernel, X, y, C=hyper.C, epsilon=hyper.epsilon, tol=hyper.tol,
        max_iter=hyper.max_iter, cache_bytes=int(hyper.cache_mib * 2**20), record=record,
    )
    sv = np.flatnonzero(res.beta != 0.0)
    return SvrModel(
        support_vectors=X[sv].copy(),
        beta=res.beta[sv].copy(),
        bias=res.bias,
        kernel=kernel,
        hyper=hyper,
        support=sv,
        n_train=len(y),
        n_iter=res.n_iter,
        violation=res.violation,
        objective=res.objective,
        converged=res.converged,
        extra={"solver": res} if record else {},
    )


def decision_function(model, X):
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != model.n_features:
        raise DimensionMismatch(f"expected {model.n_features} features, got {X.shape[1]}")
    if len(model.beta) == 0:
        return np.full(len(X), model.bias)
    return kernel_block(model.kernel, X, model.support_vectors) @ model.beta + model.bias


def predict_svr(model, x):
    """Prediction for a single input vector."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionMismatch("predict_svr takes one input vector")
    return float(decision_function(model, x[None, :])[0])


def kkt_report(model, data):
    """Per-sample violation of the epsilon-SVR optimality conditions.

    With residual ``r = y - f(x)``::

        beta == 0        needs |r| <= eps
        0 < beta < C     needs r == eps       -C < beta < 0   needs r == -eps
        beta == C        needs r >= eps       beta == -C      needs r <= -eps

    plus any excess of ``|beta|`` over ``C``. Returns ``(max, per_sample)``.
    """
    X = np.asarray(data.X, dtype=float)
    y = np.asarray(data.y, dtype=float)
    C, eps = model.hyper.C, model.hyper.epsilon
    beta = model.full_beta() if model.support is not None else np.zeros(len(y))
    r = y - decision_function(model, X)
    v = np.where(beta == 0, np.maximum(np.abs(r) - eps, 0.0), 0.0)
    pos_free = (beta > 0) & (beta < C)
    neg_free = (beta < 0) & (beta > -C)
    v = np.where(pos_free, np.abs(r - eps), v)
    v = np.where(neg_free, np.abs(r + eps), v)
    v = np.where(beta >= C, np.maximum(eps - r, 0.0), v)
    v = np.where(beta <= -C, np.maximum(r + eps, 0.0), v)
    v = v + np.maximum(np.abs(beta) - C, 0.0)
    return (float(v.max()) if len(v) else 0.0), v


def save_svr(model, path):
    """Write the ``SVR1`` text record.

    Field order: magic, ``kernel kind sigma degree``, ``hyper C epsilon tol
    max_iter``, ``shape n_support n_features``, ``bias``, then one
    ``sv beta x_1 .. x_D`` line per support vector. Floats use ``repr`` so a
    load reproduces the model exactly.
    """
    k, h = model.kernel, model.hyper
    lines = [
        MAGIC,
        f"kernel {k.kind} {k.sigma!r} {k.degree}",
        f"hyper {h.C!r} {h.epsilon!r} {h.tol!r} {h.max_iter}",
        f"shape {len(model.beta)} {model.n_features}",
        f"bias {model.bias!r}",
    ]
    for b, sv in zip(model.beta.tolist(), model.support_vectors.tolist()):
        lines.append("sv " + " ".join(repr(v) for v in [b] + sv))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_svr(path):
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != MAGIC:
        raise ValueError(f"{path} is not an {MAGIC} record")
    _, kind, sigma, degree = lines[1].split()
    _, C, eps, tol, max_iter = lines[2].split()
    _, n_sv, dim = lines[3].split()
    bias = float(lines[4].split()[1])
    body = np.array([[float(v) for v in ln.split()[1:]] for ln in lines[5:]]).reshape(int(n_sv), int(dim) + 1)
    return SvrModel(
        support_vectors=body[:, 1:],
        beta=body[:, 0],
        bias=bias,
        kernel=KernelSpec(kind, float(sigma), int(degree)),
        hyper=SvrHyperParams(float(C), float(eps), float(tol), int(max_iter)),
        support=np.arange(int(n_sv)),
        n_train=int(n_sv),
    )


class SMORegressor(RegressorMixin, BaseEstimator):
    """Epsilon-insensitive support vector regression trained by SMO.

    Parameters
    ----------
    kernel : {"anova_rbf", "rbf", "linear"}, default="anova_rbf"
    sigma : float, default=1.0
        Width parameter of the (ANOVA) RBF kernel.
    degree : int, default=1
        Exponent of the ANOVA kernel sum.
    C : float, default=1.0
        Box constraint on the dual coefficients.
    epsilon : float, default=0.005
        Half-width of the insensitive tube, in target units.
    tol : float, default=1e-3
        Stopping threshold on the maximal KKT violation.
    max_iter : int, default=1000000
        Maximum number of pair updates.
    cache_mib : float, default=64
        Byte budget of the kernel-row cache, in MiB.

    Attributes
    ----------
    model_ : SvrModel
    support_vectors_, dual_coef_, intercept_, n_iter_
    """

    def __init__(self, kernel="anova_rbf", sigma=1.0, degree=1, C=1.0, epsilon=0.005,
                 tol=1e-3, max_iter=1_000_000, cache_mib=64.0):
        self.kernel = kernel
        self.sigma = sigma
        self.degree = degree
        self.C = C
        self.epsilon = epsilon
        self.tol = tol
        self.max_iter = max_iter
        self.cache_mib = cache_mib

    def fit(self, X, y):
        from ..data.windows import SupervisedSet

        X, y = check_X_y(X, y, dtype=float, y_numeric=True)
        hyper = SvrHyperParams(self.C, self.epsilon, self.tol, self.max_iter, self.cache_mib)
        spec = KernelSpec(self.kernel, self.sigma, self.degree)
        self.model_ = train_svr(SupervisedSet(X, y, 1, ()), hyper, spec)
        self.n_features_in_ = X.shape[1]
        self.support_vectors_ = self.model_.support_vectors
        self.dual_coef_ = self.model_.beta
        self.intercept_ = self.model_.bias
        self.n_iter_ = self.model_.n_iter
        return self

    def predict(self, X):
        check_is_fitted(self)
        X = check_array(X, dtype=float)
        return decision_function(self.model_, X)
