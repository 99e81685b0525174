"""Application configuration: YAML file merged over defaults, then flag overrides.

Every key is declared once in :data:`SCHEMA` with its default, type and
constraint. The command line derives one flag per key from the dotted name
(``svr.epsilon`` becomes ``--svr-epsilon``), so the precedence is always
flag > file > default.
"""

import math
from dataclasses import dataclass
from pathlib import Path

import yaml

from .bench import BenchmarkConfig, ModelSettings, NetSettings
from .data import DEFAULT_TERMS, TERM_ORDER, TermConfig
from .exceptions import ConfigError, TypeMismatch, UnknownKey
from .frbs import FcmParams, SbcParams
from .nn import TrainHyper
from .svr import KINDS, KernelSpec, SvrHyperParams

MODEL_ALIASES = {"svr": "SVR", "sbc": "SBC", "frbs": "SBC", "brnn": "BRNN", "ffnn": "FFNN"}


@dataclass(frozen=True)
class Key:
    default: object
    kind: str  # int | float | str | bool | names
    check: object = None
    help: str = ""
    nullable: bool = False


def _pos(v):
    return v > 0


def _nonneg(v):
    return v >= 0


def _unit(v):
    return 0 < v < 1


def _net_keys(prefix, lookback):
    keys = {
        f"{prefix}.hidden": Key(16, "int", _pos, "hidden units (per direction for brnn)"),
        f"{prefix}.epochs": Key(50, "int", _pos, "maximum training epochs"),
        f"{prefix}.batch": Key(32, "int", _pos, "mini-batch size"),
        f"{prefix}.learning_rate": Key(1e-3, "float", _pos, "Adam step size"),
        f"{prefix}.beta1": Key(0.9, "float", _unit, "Adam first-moment decay"),
        f"{prefix}.beta2": Key(0.999, "float", _unit, "Adam second-moment decay"),
        f"{prefix}.patience": Key(5, "int", _pos, "epochs without verification improvement before stopping"),
    }
    if lookback:
        keys[f"{prefix}.lookback"] = Key(10, "int", _pos, "sequence length in steps")
    return keys


def _term_keys():
    keys = {}
    for name in TERM_ORDER:
        t = DEFAULT_TERMS[name]
        p = f"term.{name.lower()}"
        keys[f"{p}.sampling_minutes"] = Key(t.sampling_minutes, "int", _pos, f"{name} resampling period")
        keys[f"{p}.train_len"] = Key(t.train_len, "int", lambda v: v >= 2, f"{name} training rows")
        keys[f"{p}.verification_len"] = Key(t.verification_len, "int", _nonneg, f"{name} verification rows inside training")
        keys[f"{p}.test_len"] = Key(t.test_len, "int", _pos, f"{name} test rows")
        keys[f"{p}.window_count"] = Key(t.window_count, "int", _pos, f"{name} number of random windows")
    return keys


SCHEMA = {
    "data.csv": Key(None, "str", None, "input CSV; synthetic data is generated when unset", nullable=True),
    "data.synthetic_days": Key(183, "int", _pos, "days of synthetic data"),
    "data.synthetic_seed": Key(1, "int", _nonneg, "seed of the synthetic generator"),
    "seed": Key(1, "int", _nonneg, "master seed for windows and model initialization"),
    "horizon": Key(1, "int", _pos, "forecast steps between inputs and target"),
    "runs": Key(None, "int", _pos, "windows per term; overrides every term's window_count", nullable=True),
    "models": Key(["svr", "sbc", "brnn"], "names", lambda v: all(m in MODEL_ALIASES for m in v) and v,
                  "comma-separated models (svr, sbc|frbs, brnn, ffnn)"),
    "terms": Key(["vstelf", "stelf", "mtelf"], "names", lambda v: all(t.upper() in TERM_ORDER for t in v) and v,
                 "comma-separated terms (vstelf, stelf, mtelf)"),
    "out": Key("results", "str", None, "output directory"),
    "svr.kernel": Key("anova_rbf", "str", lambda v: v in KINDS, "kernel: " + ", ".join(KINDS)),
    "svr.sigma": Key(1.0, "float", _pos, "(ANOVA) RBF width"),
    "svr.degree": Key(1, "int", _pos, "ANOVA exponent"),
    "svr.C": Key(1.0, "float", _pos, "box constraint"),
    "svr.epsilon": Key(0.005, "float", _nonneg, "insensitive-tube half-width"),
    "svr.tol": Key(1e-3, "float", _pos, "KKT stopping tolerance"),
    "svr.max_iter": Key(1_000_000, "int", _nonneg, "maximum SMO pair updates"),
    "svr.cache_mib": Key(64.0, "float", _pos, "kernel-row cache budget in MiB"),
    "sbc.radius": Key(0.5, "float", _pos, "cluster radius"),
    "sbc.squash": Key(1.5, "float", _pos, "revision radius over cluster radius"),
    "sbc.accept_ratio": Key(0.5, "float", lambda v: 0 < v <= 1, "accept threshold over the first potential"),
    "sbc.reject_ratio": Key(0.15, "float", lambda v: 0 <= v < 1, "reject threshold over the first potential"),
    "sbc.fuzzifier": Key(2.0, "float", lambda v: v > 1, "FCM fuzzifier m"),
    "sbc.fcm_tol": Key(1e-5, "float", _pos, "FCM center-movement tolerance"),
    "sbc.fcm_max_iter": Key(100, "int", _nonneg, "FCM iteration cap"),
    **_net_keys("brnn", True),
    **_net_keys("ffnn", False),
    **_term_keys(),
}


def defaults():
    return {k: (list(v.default) if isinstance(v.default, list) else v.default) for k, v in SCHEMA.items()}


def _flatten(tree, prefix=""):
    out = {}
    for k, v in tree.items():
        name = f"{prefix}{k}"
        if isinstance(v, dict):
            nested = _flatten(v, name + ".")
            if not nested:
                raise TypeMismatch(name, "empty section")
            out.update(nested)
        else:
            out[name] = v
    return out


def _split_names(v):
    if isinstance(v, str):
        return [s.strip().lower() for s in v.split(",") if s.strip()]
    return v


def coerce(key, value):
    """Validate ``value`` for ``key``; strings (from flags) are parsed."""
    if key not in SCHEMA:
        raise UnknownKey(key)
    spec = SCHEMA[key]
    if value is None or (isinstance(value, str) and value.lower() in ("null", "none") and spec.nullable):
        if spec.nullable:
            return None
        raise TypeMismatch(key, "a value is required")
    try:
        if spec.kind == "int":
            if isinstance(value, str):
                value = int(value)
            if isinstance(value, bool) or not isinstance(value, int):
                raise TypeError
        elif spec.kind == "float":
            if isinstance(value, str):
                value = float(value)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise TypeError
            value = float(value)
        elif spec.kind == "str":
            if not isinstance(value, str):
                raise TypeError
        elif spec.kind == "names":
            value = _split_names(value)
            if not isinstance(value, list) or not all(isinstance(s, str) for s in value):
                raise TypeError
            value = [s.lower() for s in value]
    except (TypeError, ValueError):
        raise TypeMismatch(key, f"expected {spec.kind}, got {value!r}") from None
    if spec.check is not None and not spec.check(value):
        raise TypeMismatch(key, f"{value!r} is out of range ({spec.help})")
    return value


def load_file(path):
    """Flat ``{dotted key: value}`` from a YAML file; an empty file is valid."""
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"config file not found: {path}")
    try:
        tree = yaml.safe_load(p.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    if tree is None:
        return {}
    if not isinstance(tree, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return _flatten(tree)


def parse_config(path=None, overrides=None):
    """Defaults, then ``path`` (if given), then ``overrides``; every value validated."""
    cfg = defaults()
    layers = [load_file(path) if path else {}, overrides or {}]
    for layer in layers:
        for k, v in layer.items():
            cfg[k] = coerce(k, v)
    _cross_check(cfg)
    return cfg


def _cross_check(cfg):
    if cfg["sbc.reject_ratio"] >= cfg["sbc.accept_ratio"]:
        raise TypeMismatch("sbc.reject_ratio", "must be below sbc.accept_ratio")
    for name in TERM_ORDER:
        p = f"term.{name.lower()}"
        if cfg[f"{p}.verification_len"] >= cfg[f"{p}.train_len"]:
            raise TypeMismatch(f"{p}.verification_len", "must be below train_len")
    if len(set(model_names(cfg))) != len(cfg["models"]):
        raise TypeMismatch("models", "duplicate model")


def model_names(cfg):
    return [MODEL_ALIASES[m] for m in cfg["models"]]


def term_config(cfg, name):
    p = f"term.{name.lower()}"
    count = cfg["runs"] if cfg["runs"] is not None else cfg[f"{p}.window_count"]
    return TermConfig(name.upper(), cfg[f"{p}.sampling_minutes"], cfg[f"{p}.train_len"],
                      cfg[f"{p}.verification_len"], cfg[f"{p}.test_len"], count)


def _net(cfg, prefix):
    hyper = TrainHyper(cfg[f"{prefix}.epochs"], cfg[f"{prefix}.batch"], cfg[f"{prefix}.learning_rate"],
                       (cfg[f"{prefix}.beta1"], cfg[f"{prefix}.beta2"]), cfg[f"{prefix}.patience"])
    return NetSettings(cfg[f"{prefix}.hidden"], cfg.get(f"{prefix}.lookback", 1), hyper)


def model_settings(cfg):
    return ModelSettings(
        svr=SvrHyperParams(cfg["svr.C"], cfg["svr.epsilon"], cfg["svr.tol"], cfg["svr.max_iter"], cfg["svr.cache_mib"]),
        kernel=KernelSpec(cfg["svr.kernel"], cfg["svr.sigma"], cfg["svr.degree"]),
        sbc=SbcParams(cfg["sbc.radius"], cfg["sbc.squash"], cfg["sbc.accept_ratio"], cfg["sbc.reject_ratio"]),
        fcm=FcmParams(cfg["sbc.fuzzifier"], cfg["sbc.fcm_tol"], cfg["sbc.fcm_max_iter"]),
        brnn=_net(cfg, "brnn"),
        ffnn=_net(cfg, "ffnn"),
    )


def benchmark_config(cfg):
    """The :class:`~homeload.bench.BenchmarkConfig` described by a parsed config."""
    terms = [t.upper() for t in cfg["terms"]]
    return BenchmarkConfig(
        models=tuple(sorted(model_names(cfg), key=["SVR", "SBC", "BRNN", "FFNN"].index)),
        terms=tuple(term_config(cfg, t) for t in TERM_ORDER if t in terms),
        horizon=cfg["horizon"],
        seed=cfg["seed"],
        settings=model_settings(cfg),
    )


def flag_name(key):
    return "--" + key.replace(".", "-").replace("_", "-")


def dump(cfg):
    """Nested YAML text of a flat config (round-trips through :func:`parse_config`)."""
    tree = {}
    for k, v in cfg.items():
        node = tree
        *parents, leaf = k.split(".")
        for p in parents:
            node = node.setdefault(p, {})
        node[leaf] = v
    return yaml.safe_dump(tree, sort_keys=False)
