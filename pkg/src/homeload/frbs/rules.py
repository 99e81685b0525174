"""Zero-order Takagi-Sugeno rule bases built from joint input/output clusters."""

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from ..exceptions import DimensionMismatch, EmptyData
from .clustering import FcmParams, SbcParams, fcm_refine, subtractive_cluster

MAGIC = "FRB1"
UNDERFLOW = 1e-300


@dataclass(frozen=True, eq=False)
class FuzzyRuleBase:
    """Gaussian antecedents ``centers``/``widths`` of shape (rules, input_dim) and constant consequents."""

    centers: np.ndarray
    widths: np.ndarray
    consequents: np.ndarray

    def __post_init__(self):
        if len(self.consequents) < 1:
            raise EmptyData("a rule base needs at least one rule")
        if self.centers.shape != self.widths.shape or len(self.centers) != len(self.consequents):
            raise DimensionMismatch("rule arrays disagree in shape")
        if not np.all(self.widths > 0):
            raise ValueError("antecedent widths must be > 0")

    @property
    def input_dim(self):
        return self.centers.shape[1]

    @property
    def n_rules(self):
        return len(self.consequents)


def build_rulebase(centers, radius, input_dim):
    """One rule per joint-space center: inputs become the antecedent, the last coordinate the consequent.

    Every width is ``radius / sqrt(8)``, putting membership ``exp(-1)`` at
    distance ``radius / 2``.
    """
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    if len(centers) == 0 or centers.size == 0:
        raise EmptyData("a rule base needs at least one cluster")
    if centers.shape[1] != input_dim + 1:
        raise DimensionMismatch(f"centers have {centers.shape[1]} coordinates, expected {input_dim + 1}")
    ante = centers[:, :input_dim].copy()
    return FuzzyRuleBase(ante, np.full_like(ante, radius / np.sqrt(8.0)), centers[:, input_dim].copy())


def firing_log(rb, X):
    """Log firing strength of each rule, shape (n, rules)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != rb.input_dim:
        raise DimensionMismatch(f"expected {rb.input_dim} inputs, got {X.shape[1]}")
    z = (X[:, None, :] - rb.centers[None, :, :]) / rb.widths[None, :, :]
    return -0.5 * (z**2).sum(axis=2)


def predict_rules(rb, X):
    """Weighted-average TSK output; rows whose total firing underflows take the nearest rule."""
    logmu = firing_log(rb, X)
    mu = np.exp(logmu)
    total = mu.sum(axis=1)
    out = np.empty(len(mu))
    ok = total >= UNDERFLOW
    out[ok] = (mu[ok] @ rb.consequents) / total[ok]
    out[~ok] = rb.consequents[np.argmax(logmu[~ok], axis=1)]
    return out


def predict_frbs(rb, x):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionMismatch("predict_frbs takes one input vector")
    return float(predict_rules(rb, x[None, :])[0])


def save_rulebase(rb, path):
    """``FRB1`` text record: magic, ``shape rules input_dim``, then per rule
    ``rule consequent | c_1 .. c_D | w_1 .. w_D``."""
    lines = [MAGIC, f"shape {rb.n_rules} {rb.input_dim}"]
    for q, c, w in zip(rb.consequents.tolist(), rb.centers.tolist(), rb.widths.tolist()):
        lines.append(
            f"rule {q!r} | " + " ".join(map(repr, c)) + " | " + " ".join(map(repr, w))
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_rulebase(path):
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != MAGIC:
        raise ValueError(f"{path} is not an {MAGIC} record")
    _, r, d = lines[1].split()
    qs, cs, ws = [], [], []
    for ln in lines[2 : 2 + int(r)]:
        head, c, w = ln.split("|")
        qs.append(float(head.split()[1]))
        cs.append([float(v) for v in c.split()])
        ws.append([float(v) for v in w.split()])
    shape = (int(r), int(d))
    return FuzzyRuleBase(np.array(cs).reshape(shape), np.array(ws).reshape(shape), np.array(qs))


class SubtractiveFuzzyRegressor(RegressorMixin, BaseEstimator):
    """Fuzzy rule-based regressor: subtractive clustering, FCM refinement, zero-order TSK.

    Clustering runs on the joint matrix ``[X | y]``, which is expected to live
    in [0, 1]. Fitting is deterministic.

    Parameters
    ----------
    radius : float, default=0.5
        Cluster radius in normalized units.
    squash : float, default=1.5
        Revision radius as a multiple of ``radius``.
    accept_ratio, reject_ratio : float, default=0.5, 0.15
    fuzzifier : float, default=2.0
    fcm_tol : float, default=1e-5
    fcm_max_iter : int, default=100

    Attributes
    ----------
    rulebase_ : FuzzyRuleBase
    clusters_ : ClusterSet
        Centers proposed by subtractive clustering before refinement.
    objective_trace_ : ndarray
    """

    def __init__(self, radius=0.5, squash=1.5, accept_ratio=0.5, reject_ratio=0.15,
                 fuzzifier=2.0, fcm_tol=1e-5, fcm_max_iter=100):
        self.radius = radius
        self.squash = squash
        self.accept_ratio = accept_ratio
        self.reject_ratio = reject_ratio
        self.fuzzifier = fuzzifier
        self.fcm_tol = fcm_tol
        self.fcm_max_iter = fcm_max_iter

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=float, y_numeric=True)
        Z = np.column_stack([X, y])
        sbc = SbcParams(self.radius, self.squash, self.accept_ratio, self.reject_ratio)
        self.clusters_ = subtractive_cluster(Z, sbc)
        centers, _, self.objective_trace_ = fcm_refine(
            Z, self.clusters_, FcmParams(self.fuzzifier, self.fcm_tol, self.fcm_max_iter)
        )
        self.rulebase_ = build_rulebase(centers, self.radius, X.shape[1])
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self)
        return predict_rules(self.rulebase_, check_array(X, dtype=float))
