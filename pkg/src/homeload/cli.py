"""``homeload`` command line: generate, benchmark, train, predict, report.

Exit status: 0 on success, 1 on a configuration or data error, 2 when a
benchmark finished but at least one cell failed.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import config as C
from .bench import (
    MetricPair,
    fit_model,
    predict_model,
    prepare_window,
    read_records_csv,
    render_markdown,
    run_benchmark,
    write_outputs,
    write_predictions,
)
from .bench.benchmark import model_seed, window_seed
from .data import (
    apply_minmax,
    build_sequences,
    generate_synthetic,
    load_csv,
    resample_mean,
    sample_windows,
    write_csv,
)
from .data.scaling import ColumnRange, NormalizationMap
from .exceptions import HomeloadError
from .frbs import load_rulebase, predict_rules, save_rulebase
from .nn import forward_batch, load_network, save_network
from .svr import decision_function, load_svr, save_svr

EXIT_OK, EXIT_ERROR, EXIT_PARTIAL = 0, 1, 2

# short names for the commonly used keys, in addition to the generated --section-key flags
ALIASES = {
    "data.csv": ["--data"],
    "data.synthetic_days": ["--synthetic-days"],
    "data.synthetic_seed": ["--data-seed"],
}
MODEL_SUFFIX = {"SVR": "svr1", "SBC": "frb1", "BRNN": "brnn1", "FFNN": "brnn1"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_config_flags(p):
    p.add_argument("--config", help="YAML config file merged over the defaults")
    g = p.add_argument_group("configuration keys (flag > file > default)")
    for key, spec in C.SCHEMA.items():
        names = ALIASES.get(key, []) + [C.flag_name(key)]
        names = list(dict.fromkeys(names))
        default = ",".join(spec.default) if isinstance(spec.default, list) else spec.default
        g.add_argument(*names, dest=f"cfg:{key}", default=argparse.SUPPRESS, metavar=spec.kind.upper(),
                       help=f"{spec.help} (default: {default})")


def build_parser():
    parser = _Parser(prog="homeload", description="Household load forecasting benchmark.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a synthetic one-minute CSV")
    g.add_argument("--days", "--synthetic-days", dest="days", type=int, default=183, help="days to generate (default: 183)")
    g.add_argument("--seed", type=int, default=1, help="generator seed (default: 1)")
    g.add_argument("--out", default="synthetic.csv", help="output CSV path (default: synthetic.csv)")

    b = sub.add_parser("benchmark", help="run every model on every term over random windows")
    _add_config_flags(b)
    b.add_argument("--verbose", action="store_true", help="print one line per finished cell")

    t = sub.add_parser("train", help="train one model on one window and write it with its predictions")
    _add_config_flags(t)
    t.add_argument("--model", action="append", help="svr, sbc|frbs, brnn or ffnn (exactly one)")
    t.add_argument("--term", action="append", help="vstelf, stelf or mtelf (exactly one); default vstelf")
    t.add_argument("--run", type=int, default=1, help="window index within the term (default: 1)")

    p = sub.add_parser("predict", help="apply a saved model to a data file")
    _add_config_flags(p)
    p.add_argument("--model-file", required=True, help="file written by `train`")
    p.add_argument("--predictions", help="output CSV (default: <out>/predictions_<model>_<term>_0.csv)")

    r = sub.add_parser("report", help="rebuild report.md from records.csv")
    r.add_argument("--out", default="results", help="directory holding records.csv (default: results)")
    r.add_argument("--records", help="records.csv path (default: <out>/records.csv)")
    return parser


def _overrides(args):
    return {k[4:]: v for k, v in vars(args).items() if k.startswith("cfg:")}


def _load_frame(cfg):
    if cfg["data.csv"]:
        return load_csv(cfg["data.csv"])
    return generate_synthetic(cfg["data.synthetic_days"], cfg["data.synthetic_seed"])


def cmd_generate(args):
    frame = generate_synthetic(args.days, args.seed)
    out = Path(args.out)
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True)
    n = write_csv(frame, out)
    print(f"wrote {n} rows to {out}")
    return EXIT_OK


def cmd_benchmark(args):
    cfg = C.parse_config(args.config, _overrides(args))
    bcfg = C.benchmark_config(cfg)
    frame = _load_frame(cfg)

    def progress(rec):
        status = rec.error or f"mae={rec.mae:.4g} rmse={rec.rmse:.4g}"
        print(f"{rec.model} {rec.term} run {rec.run}: {status}", file=sys.stderr, flush=True)

    report = run_benchmark(frame, bcfg, progress if args.verbose else None)
    out = write_outputs(report, cfg["out"])
    (out / "config.yaml").write_text(C.dump(cfg), encoding="utf-8")
    print(render_markdown(report))
    failed = report.failed()
    if failed:
        print(f"{len(failed)} of {len(report.records)} runs failed", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def _single(values, what, default=None):
    if not values:
        if default is None:
            raise UsageError(f"train: --{what} is required")
        return default
    if len(values) != 1:
        raise UsageError(f"train: exactly one --{what} is allowed, got {len(values)}")
    return values[0]


def _save_model(name, fitted, path):
    if name == "SVR":
        save_svr(fitted, path)
    elif name == "SBC":
        save_rulebase(fitted.rulebase_, path)
    else:
        save_network(fitted, path)


def cmd_train(args):
    alias = _single(args.model, "model").lower()
    term_name = _single(args.term, "term", "vstelf").upper()
    if alias not in C.MODEL_ALIASES:
        raise UsageError(f"train: unknown model {alias!r}")
    cfg = C.parse_config(args.config, _overrides(args))
    if term_name.lower() not in ("vstelf", "stelf", "mtelf"):
        raise UsageError(f"train: unknown term {term_name!r}")
    name = C.MODEL_ALIASES[alias]
    settings = C.model_settings(cfg)
    term = C.term_config(cfg, term_name)
    if not 1 <= args.run <= term.window_count:
        raise UsageError(f"train: --run must be in [1, {term.window_count}]")
    frame = _load_frame(cfg)
    win = sample_windows(frame, term, window_seed(cfg["seed"], term))[args.run - 1]
    prepared = prepare_window(win, term, cfg["horizon"])
    fitted, flags = fit_model(name, prepared, settings, model_seed(cfg["seed"], term, args.run, name))
    pred, y = predict_model(name, fitted, prepared, settings)

    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    stem = f"model_{name.lower()}_{term.term.lower()}_{args.run}"
    model_path = out / f"{stem}.{MODEL_SUFFIX[name]}"
    _save_model(name, fitted, model_path)
    sidecar = {
        "model": name,
        "term": term.term,
        "sampling_minutes": term.sampling_minutes,
        "horizon": cfg["horizon"],
        "lookback": settings.brnn.lookback if name == "BRNN" else 1,
        "columns": list(prepared.train.names),
        "target": prepared.train.target_name,
        "dropped": list(prepared.dropped),
        "ranges": {k: [r.min, r.max] for k, r in prepared.mapping.items()},
    }
    Path(f"{model_path}.json").write_text(json.dumps(sidecar, indent=2) + "\n", encoding="utf-8")
    pred_path = out / f"predictions_{name.lower()}_{term.term.lower()}_{args.run}.csv"
    write_predictions(pred_path, np.asarray(y, dtype=float), np.asarray(pred, dtype=float))
    m = MetricPair.of(y, pred)
    print(f"model {model_path}")
    print(f"predictions {pred_path}")
    if prepared.dropped:
        print("dropped " + ",".join(prepared.dropped))
    if flags:
        print("flags " + ";".join(flags))
    print(f"MAE {m.mae!r} RMSE {m.rmse!r}")
    return EXIT_OK


def _load_model(name, path):
    if name == "SVR":
        return load_svr(path)
    if name == "SBC":
        return load_rulebase(path)
    return load_network(path)


def cmd_predict(args):
    cfg = C.parse_config(args.config, _overrides(args))
    model_path = Path(args.model_file)
    side_path = Path(f"{model_path}.json")
    if not model_path.is_file() or not side_path.is_file():
        raise FileNotFoundError(f"model file or its sidecar is missing: {model_path}")
    side = json.loads(side_path.read_text(encoding="utf-8"))
    name = side["model"]
    fitted = _load_model(name, model_path)
    frame = resample_mean(_load_frame(cfg), side["sampling_minutes"]).select(side["columns"])
    mapping = NormalizationMap((k, ColumnRange(*v)) for k, v in side["ranges"].items())
    norm = apply_minmax(frame, mapping)
    h, L = side["horizon"], side["lookback"]
    if name == "BRNN":
        seqs = build_sequences(norm.inputs, norm.target, L, h)
        pred, y = forward_batch(fitted, seqs.sequences)[0], seqs.y
    else:
        X, y = norm.inputs[:-h], norm.target[h:]
        if name == "SVR":
            pred = decision_function(fitted, X)
        elif name == "SBC":
            pred = predict_rules(fitted, X)
        else:
            pred = forward_batch(fitted, X)[0]
    path = Path(args.predictions) if args.predictions else (
        Path(cfg["out"]) / f"predictions_{name.lower()}_{side['term'].lower()}_0.csv")
    path.parent.mkdir(parents=True, exist_ok=True)
    write_predictions(path, np.asarray(y, dtype=float), np.asarray(pred, dtype=float))
    m = MetricPair.of(y, pred)
    print(f"predictions {path}")
    print(f"MAE {m.mae!r} RMSE {m.rmse!r}")
    return EXIT_OK


def cmd_report(args):
    out = Path(args.out)
    records = Path(args.records) if args.records else out / "records.csv"
    if not records.is_file():
        raise FileNotFoundError(f"records file not found: {records}")
    cfg_path = records.parent / "config.yaml"
    seed = C.parse_config(cfg_path)["seed"] if cfg_path.is_file() else None
    report = read_records_csv(records, seed)
    out.mkdir(parents=True, exist_ok=True)
    text = render_markdown(report)
    (out / "report.md").write_text(text, encoding="utf-8")
    print(text)
    return EXIT_OK


COMMANDS = {
    "generate": cmd_generate,
    "benchmark": cmd_benchmark,
    "train": cmd_train,
    "predict": cmd_predict,
    "report": cmd_report,
}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
    except (HomeloadError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
