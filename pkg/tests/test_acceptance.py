"""Acceptance gate: one test per numbered criterion.

Each test records a PASS/FAIL verdict with its measured values (printed in the
pytest terminal summary) and then asserts it. Thresholds are the stated ones;
a red verdict is reported as is.
"""

import time

import numpy as np
import pytest

from conftest import record_criterion
from homeload.bench import BenchmarkConfig, mae, rmse, run_benchmark
from homeload.bench.benchmark import window_seed
from homeload.cli import main
from homeload.data import DEFAULT_TERMS, TERM_ORDER, build_sequences, generate_synthetic, sample_windows
from homeload.data.windows import SupervisedSet
from homeload.frbs import FcmParams, SbcParams, fcm_refine, subtractive_cluster
from homeload.nn import NetworkArch, TrainHyper, init_network, loss_and_gradients, train_arrays
from homeload.svr import KernelSpec, SvrHyperParams, kernel_block, kernel_eval, kkt_report, solve, train_svr
from oracles import central_difference, relative_error, svr_dual_oracle

MODELS = ("SVR", "SBC", "BRNN")
MASTER_SEEDS = range(1, 11)


def _verdict(n, ok, detail):
    record_criterion(n, ok, detail)
    assert ok, detail


def test_criterion_01_metric_laws():
    t0 = time.perf_counter()
    rng = np.random.default_rng(1)
    ordered = True
    for _ in range(1000):
        n = int(rng.integers(1, 101))
        y, p = rng.random(n), rng.random(n)
        ordered &= bool(mae(y, p) <= rmse(y, p))
    cases = [
        (mae([0.1, 0.2, 0.3], [0.1, 0.2, 0.3]), 0.0), (mae([0, 1], [1, 0]), 1.0), (mae([1, 2, 3], [2, 2, 5]), 1.0),
        (rmse([0.1, 0.2], [0.1, 0.2]), 0.0), (rmse([0, 0], [3, 4]), np.sqrt(12.5)), (rmse([0, 1], [1, 0]), 1.0),
    ]
    worst = max(abs(got - want) for got, want in cases)
    elapsed = time.perf_counter() - t0
    ok = ordered and worst <= 1e-12 and elapsed < 1.0
    _verdict(1, ok, f"mae<=rmse on 1000 pairs: {ordered}; worst hand-case error {worst:.1e}; {elapsed:.2f} s")


def test_criterion_02_svr_oracle():
    t0 = time.perf_counter()
    gaps = []
    for seed in range(20):
        rng = np.random.default_rng(1000 + seed)
        n = int(rng.integers(2, 9))
        X = rng.random((n, 3))
        y = rng.random(n)
        spec = (KernelSpec("rbf", 1.0), KernelSpec("anova_rbf", 1.0, 1), KernelSpec("linear"))[seed % 3]
        C = float(rng.choice([0.5, 1.0, 10.0]))
        res = solve(spec, X, y, C=C, epsilon=0.05, tol=1e-8)
        _, best = svr_dual_oracle(kernel_block(spec, X, X), y, C, 0.05)
        gaps.append(abs(res.objective - best))
    kkts, converged = [], True
    for seed in range(20):
        rng = np.random.default_rng(2000 + seed)
        n = int(rng.integers(10, 201))
        X = rng.random((n, 8))
        y = np.clip(0.5 + 0.3 * np.sin(5 * X[:, 0]) * X[:, 1] + 0.05 * rng.standard_normal(n), 0, 1)
        m = train_svr(SupervisedSet(X, y, 1, ()), SvrHyperParams(C=1.0, epsilon=0.01, tol=1e-3))
        converged &= m.converged
        kkts.append(kkt_report(m, SupervisedSet(X, y, 1, ()))[0])
    elapsed = time.perf_counter() - t0
    ok = max(gaps) <= 1e-4 and converged and max(kkts) <= 1e-3 and elapsed < 30
    _verdict(2, ok, f"max |dual - oracle| {max(gaps):.1e} over 20 (n<=8); max KKT violation {max(kkts):.1e} "
                    f"over 20 (n<=200), all converged: {converged}; {elapsed:.1f} s")


def test_criterion_03_kernel_soundness():
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    specs = (KernelSpec("linear"), KernelSpec("rbf", 1.3), KernelSpec("anova_rbf", 1.0, 1), KernelSpec("anova_rbf", 0.5, 3))
    symmetric, min_eig = True, np.inf
    for _ in range(20):
        X = rng.random((int(rng.integers(2, 11)), 8))
        for s in specs:
            K = kernel_block(s, X, X)
            symmetric &= bool(np.array_equal(K, K.T))
            symmetric &= all(kernel_eval(s, X[0], x) == kernel_eval(s, x, X[0]) for x in X)
            min_eig = min(min_eig, float(np.linalg.eigvalsh(K).min()))
    identity = all(kernel_eval(KernelSpec("anova_rbf", 0.7, d), x, x) == len(x) ** d
                   for d in (1, 2, 3) for x in rng.random((5, 8)))
    elapsed = time.perf_counter() - t0
    ok = symmetric and min_eig >= -1e-8 and identity and elapsed < 5
    _verdict(3, ok, f"symmetric: {symmetric}; min eigenvalue {min_eig:.2e}; anova(x,x)=D^degree: {identity}; "
                    f"{elapsed:.2f} s")


def test_criterion_04_fcm():
    t0 = time.perf_counter()
    row_err, worst_rise, mean_err = 0.0, -np.inf, 0.0
    for seed in range(50):
        rng = np.random.default_rng(4000 + seed)
        X = rng.random((int(rng.integers(20, 120)), int(rng.integers(1, 5))))
        c = int(rng.integers(1, 6))
        init = X[rng.choice(len(X), c, replace=False)]
        V, U, trace = fcm_refine(X, init, FcmParams(m=float(rng.uniform(1.5, 3.0))))
        row_err = max(row_err, float(np.abs(U.sum(axis=1) - 1).max()))
        if len(trace) > 1:
            worst_rise = max(worst_rise, float(np.diff(trace).max()))
        V1, _, _ = fcm_refine(X, X[:1])
        mean_err = max(mean_err, float(np.abs(V1[0] - X.mean(axis=0)).max()))
    elapsed = time.perf_counter() - t0
    ok = row_err <= 1e-9 and worst_rise <= 1e-12 and mean_err <= 1e-10 and elapsed < 10
    _verdict(4, ok, f"max membership-row error {row_err:.1e}; largest objective increase {worst_rise:.1e}; "
                    f"c=1 center error {mean_err:.1e}; {elapsed:.2f} s")


def test_criterion_05_sbc_recovery():
    t0 = time.perf_counter()
    means = np.array([[0.2, 0.2], [0.8, 0.3], [0.45, 0.8]])
    std = 0.05  # closest pair of means is 0.61 apart, over 12 standard deviations
    hits = 0
    for seed in range(10):
        rng = np.random.default_rng(5000 + seed)
        X = np.vstack([mu + std * rng.standard_normal((100, 2)) for mu in means])
        lo, span = X.min(axis=0), X.max(axis=0) - X.min(axis=0)
        Z, mu_z = (X - lo) / span, (means - lo) / span
        centers = subtractive_cluster(Z, SbcParams(radius=0.4)).centers
        if len(centers) == 3:
            d = np.linalg.norm(centers[:, None, :] - mu_z[None, :, :], axis=2)
            nearest = d.argmin(axis=1)
            hits += len(set(nearest)) == 3 and bool(np.all(d.min(axis=1) <= 0.1))
    elapsed = time.perf_counter() - t0
    _verdict(5, hits >= 8 and elapsed < 10, f"{hits}/10 seeds recovered 3 centers within 0.1; {elapsed:.2f} s")


def test_criterion_06_gradient_check():
    t0 = time.perf_counter()
    rng = np.random.default_rng(6)
    worst = 0.0
    for kind in ("brnn", "ffnn"):
        for _ in range(5):
            hidden, lookback, dim = int(rng.integers(1, 5)), int(rng.integers(1, 6)), int(rng.integers(1, 4))
            m = init_network(NetworkArch(kind, hidden, lookback if kind == "brnn" else 1, dim), int(rng.integers(1e6)))
            m = m.with_flat(m.flat() + 0.1 * rng.standard_normal(m.flat().size))
            shape = (1, lookback, dim) if kind == "brnn" else (1, dim)
            X, y = rng.random(shape), rng.random(1)
            _, g = loss_and_gradients(m, X, y)
            analytic = m.with_flat(np.zeros_like(m.flat()))
            analytic.params.update(g)
            numeric = central_difference(lambda v: loss_and_gradients(m.with_flat(v), X, y)[0], m.flat())
            worst = max(worst, relative_error(analytic.flat(), numeric))
    elapsed = time.perf_counter() - t0
    _verdict(6, worst < 1e-4 and elapsed < 10, f"max relative gradient error {worst:.1e} on 5 BRNN + 5 FFNN; "
                                               f"{elapsed:.2f} s")


def test_criterion_07_learning_sanity():
    t = np.arange(421)
    x = 0.5 + 0.4 * np.sin(2 * np.pi * t / 25)
    data = build_sequences(x[:, None], x, 10, 1)
    half = len(data) // 2
    arch = NetworkArch("brnn", 16, 10, 1)
    hyper = TrainHyper(epochs=50, patience=50, seed=1)
    args = (data.sequences[:half], data.y[:half], data.sequences[half:], data.y[half:])
    m1, log1 = train_arrays(arch, *args, hyper)
    m2, log2 = train_arrays(arch, *args, hyper)
    ratio = log1.train_loss[-1] / log1.initial_train_loss
    same = log1 == log2 and np.array_equal(m1.flat(), m2.flat())
    _verdict(7, ratio < 0.5 and same, f"final/initial training loss {ratio:.3g}; identical TrainLog and weights: {same}")


@pytest.fixture(scope="module")
def half_year():
    return generate_synthetic(183, 1)


@pytest.fixture(scope="module")
def seed_reports(half_year):
    """Default benchmark for master seeds 1..10, with wall time per benchmark."""
    out = {}
    for s in MASTER_SEEDS:
        t0 = time.perf_counter()
        rep = run_benchmark(half_year, BenchmarkConfig(seed=s))
        out[s] = (rep, time.perf_counter() - t0)
    return out


@pytest.mark.slow
def test_criterion_08_protocol_shape(half_year, seed_reports):
    rep, _ = seed_reports[1]
    expected = {"VSTELF": (1, 60, 10), "STELF": (1, 3000, 3000), "MTELF": (10, 4000, 4000)}
    problems = []
    for name, (step, n_train, n_test) in expected.items():
        term = DEFAULT_TERMS[name]
        wins = sample_windows(half_year, term, window_seed(1, term))
        if len(wins) != 10:
            problems.append(f"{name}: {len(wins)} windows")
        for w in wins:
            if (w.train.step_minutes, len(w.train), len(w.test)) != (step, n_train, n_test):
                problems.append(f"{name}: window shape {(w.train.step_minutes, len(w.train), len(w.test))}")
        recs = [r for r in rep.records if r.term == name]
        if sorted({r.offset for r in recs}) != sorted({w.offset for w in wins}):
            problems.append(f"{name}: record offsets differ from sampled windows")
        if any(r.n_train != n_train for r in recs):
            problems.append(f"{name}: record train length")
        if any(r.ok and r.n_test != n_test - 1 for r in recs):
            problems.append(f"{name}: record test length")
    cells = {(r.model, r.term, r.run) for r in rep.records}
    ok = not problems and len(rep.records) == 90 and len(cells) == 90
    _verdict(8, ok, f"{len(rep.records)} records; protocol window shapes " + ("match" if not problems else "; ".join(problems)))


@pytest.mark.slow
def test_criterion_09_model_ordering(seed_reports):
    wins, svr = {t: 0 for t in TERM_ORDER}, {t: [] for t in TERM_ORDER}
    per_seed = []
    for s, (rep, _) in seed_reports.items():
        row = []
        for t in TERM_ORDER:
            m = {name: rep.means[name, t].mae for name in MODELS}
            wins[t] += m["SVR"] < min(m["SBC"], m["BRNN"])
            svr[t].append(m["SVR"])
            row.append(f"{t} " + "/".join(f"{m[name]:.4f}" for name in MODELS))
        per_seed.append(f"seed {s}: " + ", ".join(row))
    mean_svr = {t: float(np.mean(v)) for t, v in svr.items()}
    slowest = max(sec for _, sec in seed_reports.values())
    order_ok = all(w >= 8 for w in wins.values())
    bound_ok = all(v <= 0.05 for v in mean_svr.values())
    detail = ("SVR lowest in " + ", ".join(f"{t} {wins[t]}/10" for t in TERM_ORDER)
              + "; SVR mean MAE " + ", ".join(f"{t} {mean_svr[t]:.4f}" for t in TERM_ORDER)
              + f" (bound 0.05); slowest benchmark {slowest:.0f} s (bound 900 s)"
              + "\n    per seed SVR/SBC/BRNN MAE:\n    " + "\n    ".join(per_seed))
    _verdict(9, order_ok and bound_ok and slowest <= 900, detail)


@pytest.mark.slow
def test_criterion_10_zero_column(half_year):
    col = half_year.names.index("microwave_w")
    v = half_year.values.copy()
    v[:, col] = 0.0
    rep = run_benchmark(half_year.replace(values=v), BenchmarkConfig(seed=1))
    dropped = all("microwave_w" in r.dropped for r in rep.records)
    failed = rep.failed()
    ok = len(rep.records) == 90 and dropped and not failed
    _verdict(10, ok, f"{len(rep.records)} records, microwave_w dropped in all: {dropped}; failed runs: {len(failed)}")


def _without_timing(path):
    lines = path.read_text().splitlines()
    head = lines[0].split(",")
    keep = [i for i, h in enumerate(head) if h not in ("train_s", "predict_s")]
    return [[row.split(",")[i] for i in keep] for row in lines]


def _accuracy_section(path):
    text = path.read_text()
    return text[: text.index("## Execution time")]


def test_criterion_11_reproducible_cli(tmp_path, capsys):
    args = ["benchmark", "--seed", "11", "--runs", "2"]
    codes = [main([*args, "--out", str(tmp_path / d)]) for d in ("a", "b")]
    capsys.readouterr()
    a, b = tmp_path / "a", tmp_path / "b"
    same_records = _without_timing(a / "records.csv") == _without_timing(b / "records.csv")
    same_metrics = _accuracy_section(a / "report.md") == _accuracy_section(b / "report.md")
    preds = sorted(p.name for p in a.glob("predictions_*.csv"))
    same_preds = preds == sorted(p.name for p in b.glob("predictions_*.csv")) and all(
        (a / n).read_bytes() == (b / n).read_bytes() for n in preds)
    ok = codes == [0, 0] and same_records and same_metrics and same_preds and len(preds) == 18
    _verdict(11, ok, f"exit codes {codes}; records.csv without timing identical: {same_records}; "
                     f"report metric cells identical: {same_metrics}; {len(preds)} prediction files identical: {same_preds}")
