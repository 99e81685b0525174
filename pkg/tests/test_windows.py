import numpy as np
import pytest

from homeload.data import (
    DEFAULT_TERMS,
    TermConfig,
    apply_minmax,
    build_sequences,
    fit_minmax,
    generate_synthetic,
    make_sequences,
    make_supervised,
    sample_windows,
)
from homeload.exceptions import FrameTooShort, TooShortForHorizon, TooShortForLookback


def test_default_terms_match_protocol():
    shapes = {k: (t.sampling_minutes, t.train_len, t.verification_len, t.test_len, t.window_count)
              for k, t in DEFAULT_TERMS.items()}
    assert shapes == {
        "VSTELF": (1, 60, 30, 10, 10),
        "STELF": (1, 3000, 1500, 3000, 10),
        "MTELF": (10, 4000, 2000, 4000, 10),
    }


@pytest.fixture(scope="module")
def half_year():
    return generate_synthetic(183, 1)


def test_vstelf_windows(half_year):
    ws = sample_windows(half_year, DEFAULT_TERMS["VSTELF"], 5)
    assert len(ws) == 10
    for w in ws:
        assert len(w.train) == 60 and len(w.test) == 10
        assert w.test.timestamps[0] - w.train.timestamps[-1] == np.timedelta64(60, "s")
    again = sample_windows(half_year, DEFAULT_TERMS["VSTELF"], 5)
    assert [w.offset for w in ws] == [w.offset for w in again]


def test_mtelf_resampled(half_year):
    ws = sample_windows(half_year, DEFAULT_TERMS["MTELF"], 0)
    assert all(len(w.train) == 4000 and len(w.test) == 4000 and w.train.step_minutes == 10 for w in ws)


def test_exact_length_frame_has_one_offset(two_days):
    cfg = DEFAULT_TERMS["VSTELF"]
    ws = sample_windows(two_days.rows(0, 70), cfg, 9)
    assert [w.offset for w in ws] == [0] * 10
    with pytest.raises(FrameTooShort):
        sample_windows(two_days.rows(0, 69), cfg, 9)


def test_make_supervised_alignment(two_days):
    tr, te = two_days.rows(0, 60), two_days.rows(60, 70)
    a, b = make_supervised(tr, te, 1)
    assert a.X.shape == (59, 8) and len(b.y) == 9
    devices = tr.inputs[:, 2:]
    assert np.array_equal(a.y, tr.target[1:])
    assert np.allclose(a.y, devices[1:].sum(axis=1), atol=1e-9)
    assert a.attribute_names == tr.input_names
    with pytest.raises(TooShortForHorizon):
        make_supervised(tr, te, 11)


def test_supervised_in_unit_interval(two_days):
    tr, te = two_days.rows(0, 60), two_days.rows(60, 70)
    m = fit_minmax(tr)
    a, b = make_supervised(apply_minmax(tr, m), apply_minmax(te, m), 1)
    for arr in (a.X, a.y, b.X, b.y):
        assert np.all((arr >= 0) & (arr <= 1))


def test_build_sequences_counts():
    X = np.arange(120.0).reshape(60, 2)
    y = np.arange(60.0)
    s = build_sequences(X, y, 10, 1)
    assert len(s) == 50 and s.sequences.shape == (50, 10, 2)
    # sample k covers rows k..k+9 and is labelled with row k+10
    assert np.array_equal(s.sequences[3], X[3:13]) and s.y[3] == 13.0
    with pytest.raises(TooShortForLookback):
        build_sequences(X, y, 61, 1)


def test_make_sequences_split(two_days):
    tr, te = two_days.rows(0, 2000), two_days.rows(2000, 2100)
    fit, ver, tst = make_sequences(tr, 0.5, te, 10, 1)
    # each half builds on its own 1000 rows
    assert len(fit) == len(ver) == 1000 - 1 - 10 + 1
    assert np.array_equal(ver.sequences[0], tr.inputs[1000:1010])
    assert len(tst) == len(te) - 1
    _, test_sup = make_supervised(tr, te, 1)
    assert np.array_equal(tst.y, test_sup.y)
    assert np.array_equal(tst.sequences[0][-1], te.inputs[0])


def test_make_sequences_too_short(two_days):
    with pytest.raises(TooShortForLookback):
        make_sequences(two_days.rows(0, 60), 0.5, two_days.rows(60, 70), 61, 1)


def test_term_config_validation():
    with pytest.raises(ValueError):
        TermConfig("X", 1, 10, 10, 5)
    assert DEFAULT_TERMS["STELF"].verification_fraction == 0.5
