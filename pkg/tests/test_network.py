import numpy as np
import pytest

from homeload.exceptions import EmptyBatch, ShapeMismatch
from homeload.nn import (
    NetworkArch,
    forward_batch,
    forward_sequence,
    init_network,
    load_network,
    loss_and_gradients,
    predict_nn,
    save_network,
)
from oracles import central_difference, relative_error


def _zero(arch):
    m = init_network(arch, 0)
    return m.with_flat(np.zeros_like(m.flat()))


def test_init_examples():
    arch = NetworkArch("brnn", 16, 10, 8)
    a, b = init_network(arch, 5), init_network(arch, 5)
    assert np.array_equal(a.flat(), b.flat())
    assert not np.array_equal(a.flat(), init_network(arch, 6).flat())
    assert a.params["w_out"].shape == (32,)
    for k in ("b_f", "b_b", "b_out"):
        assert np.all(a.params[k] == 0)
    assert np.all(np.abs(a.params["Wx_f"]) <= 1 / np.sqrt(8))
    assert np.all(np.abs(a.params["Wh_f"]) <= 1 / np.sqrt(16))


@pytest.mark.parametrize("bad", [dict(hidden=0), dict(lookback=0), dict(kind="gru"), dict(activation="relu")])
def test_arch_validation(bad):
    with pytest.raises(ValueError):
        NetworkArch(**bad)


def test_zero_network_predicts_zero():
    seq = np.random.default_rng(0).random((10, 8))
    assert forward_sequence(_zero(NetworkArch()), seq)[0] == 0.0
    ff = _zero(NetworkArch("ffnn", 4, 1, 3))
    ff.params["b2"] = np.array(0.3)
    assert np.all(forward_batch(ff, np.random.default_rng(1).random((6, 3)))[0] == 0.3)


def test_hidden_states_bounded():
    m = init_network(NetworkArch("brnn", 6, 7, 3), 1)
    _, c = forward_batch(m, np.random.default_rng(2).random((30, 7, 3)))
    assert np.all(np.abs(c["hf"][1:]) < 1) and np.all(np.abs(c["hb"][:-1]) < 1)
    # double-precision tanh rounds to exactly +-1 once saturated
    for k in ("Wx_f", "Wh_f", "Wx_b", "Wh_b"):
        m.params[k] = m.params[k] * 50
    _, c = forward_batch(m, 20 * np.random.default_rng(3).standard_normal((30, 7, 3)))
    assert np.all(np.abs(c["hf"]) <= 1) and np.all(np.abs(c["hb"]) <= 1)


def test_time_reversal_symmetry():
    rng = np.random.default_rng(3)
    m = init_network(NetworkArch("brnn", 5, 6, 4), 2)
    for k in ("b_f", "b_b"):
        m.params[k] = rng.standard_normal(5)
    swapped = m.copy()
    for a, b in (("Wx_f", "Wx_b"), ("Wh_f", "Wh_b"), ("b_f", "b_b")):
        swapped.params[a], swapped.params[b] = m.params[b].copy(), m.params[a].copy()
    swapped.params["w_out"] = np.r_[m.params["w_out"][5:], m.params["w_out"][:5]]
    for _ in range(10):
        seq = rng.random((6, 4))
        assert forward_sequence(swapped, seq[::-1])[0] == pytest.approx(forward_sequence(m, seq)[0], abs=1e-14)


def test_predict_matches_forward():
    m = init_network(NetworkArch(), 4)
    seq = np.random.default_rng(4).random((10, 8))
    assert predict_nn(m, seq) == forward_sequence(m, seq)[0]
    assert predict_nn(m, seq) == predict_nn(m, seq)
    assert predict_nn(_zero(NetworkArch()), seq) == 0.0


def test_shape_errors():
    m = init_network(NetworkArch("brnn", 3, 5, 2), 0)
    with pytest.raises(ShapeMismatch):
        forward_batch(m, np.zeros((4, 6, 2)))
    with pytest.raises(ShapeMismatch):
        forward_sequence(m, np.zeros((2, 5, 2)))
    with pytest.raises(EmptyBatch):
        loss_and_gradients(m, np.zeros((0, 5, 2)), [])


CONFIGS = [("brnn", 1, 1, 1), ("brnn", 2, 3, 2), ("brnn", 3, 5, 3), ("brnn", 4, 4, 2), ("brnn", 4, 5, 4),
           ("ffnn", 3, 1, 2), ("ffnn", 5, 1, 4)]


@pytest.mark.parametrize("kind,hidden,lookback,dim", CONFIGS)
def test_gradients_match_central_differences(kind, hidden, lookback, dim):
    rng = np.random.default_rng(hidden * 10 + lookback)
    m = init_network(NetworkArch(kind, hidden, lookback, dim), 3)
    m = m.with_flat(m.flat() + 0.1 * rng.standard_normal(m.flat().size))
    shape = (1, lookback, dim) if kind == "brnn" else (1, dim)
    X, y = rng.random(shape), rng.random(1)
    _, g = loss_and_gradients(m, X, y)
    analytic = m.with_flat(np.zeros_like(m.flat()))
    analytic.params.update(g)
    numeric = central_difference(lambda v: loss_and_gradients(m.with_flat(v), X, y)[0], m.flat())
    assert relative_error(analytic.flat(), numeric) < 1e-4


def test_zero_residual_is_stationary():
    m = init_network(NetworkArch("brnn", 3, 4, 2), 5)
    X = np.random.default_rng(5).random((7, 4, 2))
    mse, g = loss_and_gradients(m, X, forward_batch(m, X)[0])
    assert mse == 0.0 and all(np.all(v == 0) for v in g.values())


def test_duplicated_batch_same_gradients():
    m = init_network(NetworkArch("brnn", 3, 4, 2), 6)
    rng = np.random.default_rng(6)
    X, y = rng.random((1, 4, 2)), rng.random(1)
    l1, g1 = loss_and_gradients(m, X, y)
    l3, g3 = loss_and_gradients(m, np.repeat(X, 3, axis=0), np.repeat(y, 3))
    assert l1 == pytest.approx(l3, rel=1e-14)
    for k in g1:
        assert np.allclose(g1[k], g3[k], rtol=1e-13, atol=1e-16)


@pytest.mark.parametrize("kind", ["brnn", "ffnn"])
def test_save_load_exact(tmp_path, kind):
    m = init_network(NetworkArch(kind, 4, 3, 2), 7)
    save_network(m, tmp_path / "n.brnn1")
    assert (tmp_path / "n.brnn1").read_text().startswith("BRNN1\n")
    back = load_network(tmp_path / "n.brnn1")
    assert back.arch == m.arch and np.array_equal(back.flat(), m.flat())
