"""Mini-batch Adam training with verification-set early stopping."""

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .._rng import make_rng
from ..exceptions import EmptySet
from .network import NetworkArch, forward_batch, init_network, loss_and_gradients


@dataclass(frozen=True)
class TrainHyper:
    epochs: int = 50
    batch: int = 32
    learning_rate: float = 1e-3
    betas: tuple = (0.9, 0.999)
    patience: int = 5
    seed: int = 0
    adam_eps: float = 1e-8

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be > 0")
        if self.epochs < 1 or self.batch < 1 or self.patience < 1:
            raise ValueError("epochs, batch and patience must be >= 1")
        if not all(0 < b < 1 for b in self.betas):
            raise ValueError("moment decay rates must be in (0, 1)")


@dataclass
class TrainLog:
    """Per-epoch losses (epochs are 1-based; ``initial_*`` is before any update)."""

    train_loss: list = field(default_factory=list)
    verification_loss: list = field(default_factory=list)
    initial_train_loss: float = float("nan")
    initial_verification_loss: float = float("nan")
    best_epoch: int = 0
    stopped_epoch: int = 0


class Adam:
    def __init__(self, params, lr, betas, eps):
        self.lr, (self.b1, self.b2), self.eps = lr, betas, eps
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}
        self.t = 0

    def step(self, params, grads):
        self.t += 1
        c1 = 1.0 - self.b1**self.t
        c2 = 1.0 - self.b2**self.t
        for k in params:
            g = grads[k]
            self.m[k] = self.b1 * self.m[k] + (1.0 - self.b1) * g
            self.v[k] = self.b2 * self.v[k] + (1.0 - self.b2) * g * g
            params[k] = params[k] - self.lr * (self.m[k] / c1) / (np.sqrt(self.v[k] / c2) + self.eps)


class EarlyStopping:
    """Track the best verification loss; ``update`` returns True when training should stop."""

    def __init__(self, patience):
        self.patience = patience
        self.best = np.inf
        self.best_epoch = 0
        self.wait = 0

    def update(self, epoch, loss):
        if loss < self.best:
            self.best, self.best_epoch, self.wait = loss, epoch, 0
            return False
        self.wait += 1
        return self.wait >= self.patience


def _mse(model, X, y):
    return float(np.mean((forward_batch(model, X)[0] - y) ** 2))


def _arrays(dataset):
    X = getattr(dataset, "sequences", None)
    if X is None:
        X = dataset.X
    return X, dataset.y


def train(arch, trainset, verifset, hyper=TrainHyper()):
    """Train on a SequenceSet (``brnn``) or SupervisedSet (``ffnn``) pair.

    Returns the best-verification snapshot and its :class:`TrainLog`.
    """
    return train_arrays(arch, *_arrays(trainset), *_arrays(verifset), hyper)


def train_arrays(arch, X, y, X_val, y_val, hyper=TrainHyper()):
    """Train ``arch`` on ``(X, y)`` and return the best-verification snapshot and its log.

    Batches are drawn from a fresh permutation each epoch (Philox stream 1 of
    ``hyper.seed``); initialization uses stream 0. Everything runs in a fixed
    order, so equal inputs give bit-identical models.
    """
    X, y = np.asarray(X, dtype=float), np.asarray(y, dtype=float)
    X_val, y_val = np.asarray(X_val, dtype=float), np.asarray(y_val, dtype=float)
    if len(y) == 0 or len(y_val) == 0:
        raise EmptySet("training and verification sets must be non-empty")
    model = init_network(arch, hyper.seed)
    opt = Adam(model.params, hyper.learning_rate, hyper.betas, hyper.adam_eps)
    rng = make_rng(hyper.seed, 1)
    log = TrainLog(initial_train_loss=_mse(model, X, y), initial_verification_loss=_mse(model, X_val, y_val))
    stopper = EarlyStopping(hyper.patience)
    best = model.copy()
    for epoch in range(1, hyper.epochs + 1):
        order = rng.permutation(len(y))
        for s in range(0, len(y), hyper.batch):
            idx = order[s : s + hyper.batch]
            _, grads = loss_and_gradients(model, X[idx], y[idx])
            opt.step(model.params, grads)
        log.train_loss.append(_mse(model, X, y))
        vloss = _mse(model, X_val, y_val)
        log.verification_loss.append(vloss)
        log.stopped_epoch = epoch
        stop = stopper.update(epoch, vloss)
        if stopper.best_epoch == epoch:
            best = model.copy()
        if stop:
            break
    log.best_epoch = stopper.best_epoch
    return best, log


def split_verification(X, y, fraction):
    """Contiguous split: the last ``fraction`` of samples is verification."""
    n = len(y)
    n_ver = int(round(n * fraction))
    if not 0 < n_ver < n:
        raise EmptySet(f"cannot split {n} samples with verification fraction {fraction}")
    return X[: n - n_ver], y[: n - n_ver], X[n - n_ver :], y[n - n_ver :]


def ffnn_train_predict(train_set, test_set, arch, hyper=TrainHyper(), verification_fraction=0.5):
    """Fit a feed-forward baseline on a SupervisedSet pair and predict the test rows."""
    if arch.kind != "ffnn":
        raise ValueError("ffnn_train_predict needs an ffnn architecture")
    Xtr, ytr, Xv, yv = split_verification(train_set.X, train_set.y, verification_fraction)
    model, _ = train_arrays(arch, Xtr, ytr, Xv, yv, hyper)
    return forward_batch(model, test_set.X)[0]


class _NetRegressor(RegressorMixin, BaseEstimator):
    _kind = None

    def _hyper(self):
        return TrainHyper(
            epochs=self.epochs, batch=self.batch_size, learning_rate=self.learning_rate,
            betas=(self.beta1, self.beta2), patience=self.patience, seed=self.random_state,
        )

    def _validate(self, X):
        X = np.asarray(X, dtype=float)
        if self._kind == "brnn":
            if X.ndim != 3:
                raise ValueError("expected sequences of shape (samples, lookback, features)")
            if not np.all(np.isfinite(X)):
                raise ValueError("input contains NaN or infinity")
            return X
        return check_array(X, dtype=float)

    def fit(self, X, y, X_val=None, y_val=None):
        """Fit with explicit verification data, or carve it off the end of ``X``."""
        X = self._validate(X)
        y = np.asarray(y, dtype=float).ravel()
        if X_val is None:
            X, y, X_val, y_val = split_verification(X, y, self.verification_fraction)
        else:
            X_val, y_val = self._validate(X_val), np.asarray(y_val, dtype=float).ravel()
        lookback = X.shape[1] if self._kind == "brnn" else 1
        arch = NetworkArch(self._kind, self.hidden, lookback, X.shape[-1])
        self.model_, self.log_ = train_arrays(arch, X, y, X_val, y_val, self._hyper())
        self.n_features_in_ = X.shape[-1]
        return self

    def predict(self, X):
        check_is_fitted(self)
        return forward_batch(self.model_, self._validate(X))[0]


class BRNNRegressor(_NetRegressor):
    """Bidirectional tanh RNN regressor on ``(samples, lookback, features)`` input.

    Parameters
    ----------
    hidden : int, default=16
        Units per direction.
    epochs, batch_size, learning_rate, beta1, beta2, patience
        Adam and early-stopping settings.
    verification_fraction : float, default=0.5
        Used only when ``fit`` gets no explicit verification data.
    random_state : int, default=0
    """

    _kind = "brnn"

    def __init__(self, hidden=16, epochs=50, batch_size=32, learning_rate=1e-3, beta1=0.9,
                 beta2=0.999, patience=5, verification_fraction=0.5, random_state=0):
        self.hidden = hidden
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.patience = patience
        self.verification_fraction = verification_fraction
        self.random_state = random_state


class FFNNRegressor(_NetRegressor):
    """One-hidden-layer tanh network on row features; same training contract as :class:`BRNNRegressor`."""

    _kind = "ffnn"

    def __init__(self, hidden=16, epochs=50, batch_size=32, learning_rate=1e-3, beta1=0.9,
                 beta2=0.999, patience=5, verification_fraction=0.5, random_state=0):
        self.hidden = hidden
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.patience = patience
        self.verification_fraction = verification_fraction
        self.random_state = random_state
