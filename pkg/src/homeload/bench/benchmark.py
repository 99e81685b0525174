"""The windowed benchmark: every enabled model on every term over random windows."""

import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .._rng import derive_seed
from ..data import (
    DEFAULT_TERMS,
    TERM_ORDER,
    apply_minmax,
    drop_zero_columns,
    fit_minmax,
    invert_minmax,
    make_sequences,
    make_supervised,
    sample_windows,
)
from ..exceptions import DataError, DegenerateColumn
from ..frbs import FcmParams, SbcParams, SubtractiveFuzzyRegressor
from ..nn import NetworkArch, TrainHyper, forward_batch, split_verification, train_arrays
from ..svr import KernelSpec, SvrHyperParams, decision_function, train_svr
from .metrics import MetricPair, time_run

MODEL_ORDER = ("SVR", "SBC", "BRNN", "FFNN")


@dataclass(frozen=True)
class NetSettings:
    hidden: int = 16
    lookback: int = 10
    train: TrainHyper = TrainHyper()


@dataclass(frozen=True)
class ModelSettings:
    """Hyperparameters of every model family."""

    svr: SvrHyperParams = SvrHyperParams()
    kernel: KernelSpec = KernelSpec()
    sbc: SbcParams = SbcParams()
    fcm: FcmParams = FcmParams()
    brnn: NetSettings = NetSettings()
    ffnn: NetSettings = NetSettings()


@dataclass(frozen=True)
class BenchmarkConfig:
    models: tuple = ("SVR", "SBC", "BRNN")
    terms: tuple = tuple(DEFAULT_TERMS[t] for t in TERM_ORDER)
    horizon: int = 1
    seed: int = 1
    settings: ModelSettings = ModelSettings()

    def __post_init__(self):
        bad = [m for m in self.models if m not in MODEL_ORDER]
        if bad or not self.models:
            raise ValueError(f"unknown or empty model list {self.models!r}")
        if len(set(self.models)) != len(self.models):
            raise ValueError("duplicate models")
        if not self.terms:
            raise ValueError("no terms selected")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")

    def with_runs(self, runs):
        return replace(self, terms=tuple(replace(t, window_count=int(runs)) for t in self.terms))

    def snapshot(self):
        return asdict(self)


@dataclass
class RunRecord:
    """One (model, term, window) cell. Metrics are in normalized target units."""

    model: str
    term: str
    run: int
    offset: int
    mae: float = math.nan
    rmse: float = math.nan
    train_s: float = 0.0
    predict_s: float = 0.0
    dropped: tuple = ()
    flags: tuple = ()
    error: str = ""
    n_train: int = 0
    n_test: int = 0
    mae_w: float = math.nan
    rmse_w: float = math.nan
    actual: np.ndarray = field(default=None, repr=False)
    predicted: np.ndarray = field(default=None, repr=False)

    @property
    def ok(self):
        return not self.error

    @property
    def metrics(self):
        return MetricPair(self.mae, self.rmse)


@dataclass(frozen=True)
class CellMean:
    mae: float
    rmse: float
    train_s: float
    predict_s: float
    n_ok: int
    n_failed: int

    @property
    def total_s(self):
        return self.train_s + self.predict_s


@dataclass
class BenchmarkReport:
    records: list
    means: dict
    config: dict
    seed: int

    def failed(self):
        return [r for r in self.records if not r.ok]


@dataclass(frozen=True)
class PreparedWindow:
    """A normalized train/test pair with its learning sets."""

    term: object
    train: object
    test: object
    mapping: object
    dropped: tuple
    horizon: int

    def supervised(self):
        return make_supervised(self.train, self.test, self.horizon)

    def sequences(self, lookback):
        return make_sequences(self.train, self.term.verification_fraction, self.test, lookback, self.horizon)


def prepare_window(window, term, horizon=1):
    """Drop columns that are all zero in training, then fit min-max on training only."""
    train, dropped = drop_zero_columns(window.train)
    test = window.test.select(train.names)
    mapping = fit_minmax(train)
    return PreparedWindow(term, apply_minmax(train, mapping), apply_minmax(test, mapping), mapping,
                          tuple(dropped), horizon)


def fit_model(name, prepared, settings=ModelSettings(), seed=0):
    """Train one model family on a prepared window; returns ``(fitted, flags)``."""
    flags = []
    if name == "SVR":
        tr, _ = prepared.supervised()
        model = train_svr(tr, settings.svr, settings.kernel, seed=seed)
        if not model.converged:
            flags.append("not_converged")
        return model, flags
    if name == "SBC":
        tr, _ = prepared.supervised()
        s, f = settings.sbc, settings.fcm
        est = SubtractiveFuzzyRegressor(s.radius, s.squash, s.accept_ratio, s.reject_ratio, f.m, f.tol, f.max_iter)
        return est.fit(tr.X, tr.y), flags
    if name == "BRNN":
        ns = settings.brnn
        fit, ver, _ = prepared.sequences(ns.lookback)
        arch = NetworkArch("brnn", ns.hidden, ns.lookback, fit.sequences.shape[2])
        model, _ = train_arrays(arch, fit.sequences, fit.y, ver.sequences, ver.y, replace(ns.train, seed=seed))
        return model, flags
    if name == "FFNN":
        ns = settings.ffnn
        tr, _ = prepared.supervised()
        Xf, yf, Xv, yv = split_verification(tr.X, tr.y, prepared.term.verification_fraction)
        arch = NetworkArch("ffnn", ns.hidden, 1, tr.X.shape[1])
        model, _ = train_arrays(arch, Xf, yf, Xv, yv, replace(ns.train, seed=seed))
        return model, flags
    raise ValueError(f"unknown model {name!r}")


def predict_model(name, fitted, prepared, settings=ModelSettings()):
    """Test-split predictions and the matching normalized targets."""
    _, te = prepared.supervised()
    if name == "SVR":
        return decision_function(fitted, te.X), te.y
    if name == "SBC":
        return fitted.predict(te.X), te.y
    if name == "BRNN":
        _, _, tst = prepared.sequences(settings.brnn.lookback)
        return forward_batch(fitted, tst.sequences)[0], tst.y
    if name == "FFNN":
        return forward_batch(fitted, te.X)[0], te.y
    raise ValueError(f"unknown model {name!r}")


def _impute(pred, prepared):
    """Replace undefined predictions by the training-target mean."""
    pred = np.asarray(pred, dtype=float).copy()
    bad = ~np.isfinite(pred)
    if bad.any():
        pred[bad] = float(np.mean(prepared.train.target))
    return pred, int(bad.sum())


def _physical(y, pred, prepared):
    """Metrics in target units; undefined when the training target is constant."""
    tgt = prepared.train.target_name
    try:
        return MetricPair.of(invert_minmax(y, tgt, prepared.mapping), invert_minmax(pred, tgt, prepared.mapping))
    except DegenerateColumn:
        return MetricPair(math.nan, math.nan)


def run_cell(name, prepared, settings, seed):
    """Fit, time, predict and score one cell; errors are returned, not raised."""
    rec = {"dropped": prepared.dropped}
    try:
        (fitted, flags), rec["train_s"] = time_run(lambda: fit_model(name, prepared, settings, seed))
        (pred, y), rec["predict_s"] = time_run(lambda: predict_model(name, fitted, prepared, settings))
        pred, n_bad = _impute(pred, prepared)
        if n_bad:
            flags.append(f"imputed={n_bad}")
        pair = MetricPair.of(y, pred)
        pw = _physical(y, pred, prepared)
    except Exception as exc:  # a failed cell must not abort the benchmark
        rec.update(error=f"{type(exc).__name__}: {exc}", flags=(f"error={type(exc).__name__}",))
        return rec, None
    rec.update(mae=pair.mae, rmse=pair.rmse, mae_w=pw.mae, rmse_w=pw.rmse, flags=tuple(flags),
               n_test=len(y), actual=np.asarray(y, dtype=float), predicted=pred)
    return rec, fitted


def _means(records):
    out = {}
    keys = sorted({(r.model, r.term) for r in records}, key=_cell_key)
    for key in keys:
        rs = [r for r in records if (r.model, r.term) == key]
        good = [r for r in rs if r.ok]
        if good:
            m = CellMean(
                float(np.mean([r.mae for r in good])), float(np.mean([r.rmse for r in good])),
                float(np.mean([r.train_s for r in good])), float(np.mean([r.predict_s for r in good])),
                len(good), len(rs) - len(good),
            )
        else:
            m = CellMean(math.nan, math.nan, math.nan, math.nan, 0, len(rs))
        out[key] = m
    return out


def _cell_key(key):
    model, term = key
    t = TERM_ORDER.index(term) if term in TERM_ORDER else len(TERM_ORDER)
    return MODEL_ORDER.index(model), t, term


def _record_key(r):
    return _cell_key((r.model, r.term)) + (r.run,)


def term_index(term):
    return TERM_ORDER.index(term.term) if term.term in TERM_ORDER else len(TERM_ORDER)


def window_seed(master, term):
    return derive_seed(master, 0, term_index(term))


def model_seed(master, term, run, model):
    return derive_seed(master, 1, term_index(term), run, MODEL_ORDER.index(model))


def run_benchmark(frame, cfg=BenchmarkConfig(), progress=None):
    """Run every (model, term, window) cell and collect a :class:`BenchmarkReport`.

    Window offsets depend only on the master seed and the term; model seeds on
    (seed, term, run, model). A failing cell is recorded with its error and the
    remaining cells still run. ``progress(record)`` is called after each cell.
    """
    records = []
    for term in cfg.terms:
        windows = sample_windows(frame, term, window_seed(cfg.seed, term))
        for run, win in enumerate(windows, start=1):
            try:
                prepared = prepare_window(win, term, cfg.horizon)
                prep_error = None
            except DataError as exc:
                prepared, prep_error = None, exc
            for name in cfg.models:
                rec = RunRecord(name, term.term, run, win.offset, n_train=len(win.train))
                if prep_error is not None:
                    rec.error = f"{type(prep_error).__name__}: {prep_error}"
                    rec.flags = (f"error={type(prep_error).__name__}",)
                else:
                    fields, _ = run_cell(name, prepared, cfg.settings, model_seed(cfg.seed, term, run, name))
                    for k, v in fields.items():
                        setattr(rec, k, v)
                records.append(rec)
                if progress is not None:
                    progress(rec)
    records.sort(key=_record_key)
    return BenchmarkReport(records, _means(records), cfg.snapshot(), cfg.seed)
