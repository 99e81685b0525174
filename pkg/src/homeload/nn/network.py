"""Bidirectional tanh RNN and one-hidden-layer feed-forward network in numpy.

Shapes (``H`` hidden units per direction, ``D`` inputs, ``L`` lookback)::

    brnn: Wx_f (H, D)  Wh_f (H, H)  b_f (H,)     forward cell,  t = 1..L
          Wx_b (H, D)  Wh_b (H, H)  b_b (H,)     backward cell, t = L..1
          w_out (2H,)  b_out ()                  readout on [h_f(L); h_b(1)]
    ffnn: W1 (H, D)  b1 (H,)  w2 (H,)  b2 ()
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .._rng import make_rng
from ..exceptions import EmptyBatch, ShapeMismatch

MAGIC = "BRNN1"

PARAM_ORDER = {
    "brnn": ("Wx_f", "Wh_f", "b_f", "Wx_b", "Wh_b", "b_b", "w_out", "b_out"),
    "ffnn": ("W1", "b1", "w2", "b2"),
}


@dataclass(frozen=True)
class NetworkArch:
    kind: str = "brnn"
    hidden: int = 16
    lookback: int = 10
    input_dim: int = 8
    activation: str = "tanh"

    def __post_init__(self):
        if self.kind not in PARAM_ORDER:
            raise ValueError(f"unknown network kind {self.kind!r}")
        if self.hidden < 1 or self.input_dim < 1:
            raise ValueError("hidden and input_dim must be >= 1")
        if self.kind == "brnn" and self.lookback < 1:
            raise ValueError("lookback must be >= 1")
        if self.activation != "tanh":
            raise ValueError("only tanh activation is supported")

    def shapes(self):
        H, D = self.hidden, self.input_dim
        if self.kind == "brnn":
            return {
                "Wx_f": (H, D), "Wh_f": (H, H), "b_f": (H,),
                "Wx_b": (H, D), "Wh_b": (H, H), "b_b": (H,),
                "w_out": (2 * H,), "b_out": (),
            }
        return {"W1": (H, D), "b1": (H,), "w2": (H,), "b2": ()}


@dataclass(eq=False)
class NetModel:
    """Network parameters keyed by name; ``params`` follows ``PARAM_ORDER``."""

    arch: NetworkArch
    params: dict

    def copy(self):
        return NetModel(self.arch, {k: v.copy() for k, v in self.params.items()})

    def flat(self):
        return np.concatenate([self.params[k].ravel() for k in PARAM_ORDER[self.arch.kind]])

    def with_flat(self, vec):
        out, pos = {}, 0
        for k in PARAM_ORDER[self.arch.kind]:
            shp = self.arch.shapes()[k]
            size = int(np.prod(shp))
            out[k] = np.asarray(vec[pos : pos + size], dtype=float).reshape(shp).copy()
            pos += size
        return NetModel(self.arch, out)


BrnnModel = NetModel


def init_network(arch, seed=0):
    """Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases.

    Weights are drawn in ``PARAM_ORDER`` from one Philox stream, so the result
    is a pure function of ``(arch, seed)``.
    """
    rng = make_rng(seed, 0)
    params = {}
    for name, shp in arch.shapes().items():
        if name.startswith("b"):
            params[name] = np.zeros(shp)
        else:
            fan_in = shp[-1] if len(shp) == 2 else shp[0]
            lim = 1.0 / np.sqrt(fan_in)
            params[name] = rng.uniform(-lim, lim, size=shp)
    return NetModel(arch, params)


def _check_batch(model, X):
    X = np.asarray(X, dtype=float)
    a = model.arch
    if a.kind == "brnn":
        if X.ndim == 2:
            X = X[None]
        if X.ndim != 3 or X.shape[1:] != (a.lookback, a.input_dim):
            raise ShapeMismatch(f"expected (*, {a.lookback}, {a.input_dim}) sequences, got {X.shape}")
    else:
        if X.ndim == 1:
            X = X[None]
        if X.ndim != 2 or X.shape[1] != a.input_dim:
            raise ShapeMismatch(f"expected (*, {a.input_dim}) rows, got {X.shape}")
    return X


def forward_batch(model, X):
    """Predictions of shape (B,) and the activation cache for backprop."""
    X = _check_batch(model, X)
    p = model.params
    if model.arch.kind == "ffnn":
        h = np.tanh(X @ p["W1"].T + p["b1"])
        return h @ p["w2"] + p["b2"], {"X": X, "h": h}
    B, L, _ = X.shape
    H = model.arch.hidden
    hf = np.zeros((L + 1, B, H))  # hf[t + 1] is the forward state after step t
    for t in range(L):
        hf[t + 1] = np.tanh(X[:, t] @ p["Wx_f"].T + hf[t] @ p["Wh_f"].T + p["b_f"])
    hb = np.zeros((L + 1, B, H))  # hb[t] is the backward state after step t; hb[L] = 0
    for t in range(L - 1, -1, -1):
        hb[t] = np.tanh(X[:, t] @ p["Wx_b"].T + hb[t + 1] @ p["Wh_b"].T + p["b_b"])
    pred = hf[L] @ p["w_out"][:H] + hb[0] @ p["w_out"][H:] + p["b_out"]
    return pred, {"X": X, "hf": hf, "hb": hb}


def forward_sequence(model, seq):
    """Prediction for one sequence (or one feature row for ``ffnn``) plus its cache."""
    pred, cache = forward_batch(model, seq)
    if len(pred) != 1:
        raise ShapeMismatch("forward_sequence takes a single sample")
    return float(pred[0]), cache


def predict_nn(model, X):
    """Predictions without keeping the cache; a single sample returns a float."""
    X = np.asarray(X, dtype=float)
    single = X.ndim == (2 if model.arch.kind == "brnn" else 1)
    pred = forward_batch(model, X)[0]
    return float(pred[0]) if single else pred


def loss_and_gradients(model, X, y):
    """Mean squared error over the batch and its exact gradient (BPTT for ``brnn``)."""
    X = np.asarray(X, dtype=float)
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if len(y) == 0:
        raise EmptyBatch("empty batch")
    pred, c = forward_batch(model, X)
    if len(pred) != len(y):
        raise ShapeMismatch("batch and targets differ in length")
    r = pred - y
    mse = float(np.mean(r**2))
    g = 2.0 * r / len(y)
    p = model.params
    if model.arch.kind == "ffnn":
        h = c["h"]
        dz = np.outer(g, p["w2"]) * (1.0 - h**2)
        grads = {"W1": dz.T @ c["X"], "b1": dz.sum(axis=0), "w2": h.T @ g, "b2": np.array(g.sum())}
        return mse, grads
    H = model.arch.hidden
    Xs, hf, hb = c["X"], c["hf"], c["hb"]
    L = Xs.shape[1]
    grads = {k: np.zeros_like(v) for k, v in p.items()}
    grads["w_out"] = np.concatenate([hf[L].T @ g, hb[0].T @ g])
    grads["b_out"] = np.array(g.sum())
    dh = np.outer(g, p["w_out"][:H])
    for t in range(L - 1, -1, -1):
        dz = dh * (1.0 - hf[t + 1] ** 2)
        grads["Wx_f"] += dz.T @ Xs[:, t]
        grads["Wh_f"] += dz.T @ hf[t]
        grads["b_f"] += dz.sum(axis=0)
        dh = dz @ p["Wh_f"]
    dh = np.outer(g, p["w_out"][H:])
    for t in range(L):
        dz = dh * (1.0 - hb[t] ** 2)
        grads["Wx_b"] += dz.T @ Xs[:, t]
        grads["Wh_b"] += dz.T @ hb[t + 1]
        grads["b_b"] += dz.sum(axis=0)
        dh = dz @ p["Wh_b"]
    return mse, grads


def save_network(model, path):
    """``BRNN1`` text record.

    Line 2 is ``arch kind hidden lookback input_dim activation``; then one
    ``param name dims... | values...`` line per block in ``PARAM_ORDER``
    (row-major values, ``repr`` floats).
    """
    a = model.arch
    lines = [MAGIC, f"arch {a.kind} {a.hidden} {a.lookback} {a.input_dim} {a.activation}"]
    for name in PARAM_ORDER[a.kind]:
        v = model.params[name]
        dims = " ".join(str(d) for d in v.shape)
        lines.append(f"param {name} {dims} | " + " ".join(map(repr, v.ravel().tolist())))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_network(path):
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != MAGIC:
        raise ValueError(f"{path} is not a {MAGIC} record")
    _, kind, hidden, lookback, dim, act = lines[1].split()
    arch = NetworkArch(kind, int(hidden), int(lookback), int(dim), act)
    params = {}
    for ln in lines[2:]:
        head, vals = ln.split("|")
        name = head.split()[1]
        params[name] = np.array([float(v) for v in vals.split()]).reshape(arch.shapes()[name])
    return NetModel(arch, params)
