"""Markdown and CSV outputs of a benchmark report."""

import csv
import math
from dataclasses import dataclass
from pathlib import Path

from ..data import TERM_ORDER
from ..exceptions import EmptyReport
from .benchmark import MODEL_ORDER, BenchmarkReport, RunRecord, _means, _record_key

RECORD_HEADER = ("model", "term", "run", "offset", "mae", "rmse", "train_s", "predict_s", "dropped", "flags")
TIMING_COLUMNS = ("train_s", "predict_s")


def fmt(x):
    """Four significant digits; ``n/a`` for missing values."""
    if x is None or not math.isfinite(x):
        return "n/a"
    return f"{x:.4g}"


def human_time(seconds):
    """Coarse wall-time text such as ``less than 10 sec`` or ``around 5 min``."""
    if not math.isfinite(seconds):
        return "n/a"
    if seconds < 10:
        return "less than 10 sec"
    if seconds < 60:
        return f"around {max(10, 5 * round(seconds / 5))} sec"
    if seconds < 3600:
        return f"around {max(1, round(seconds / 60))} min"
    return f"around {round(seconds / 3600)} h"


@dataclass(frozen=True)
class Grid:
    """A model-by-term table; ``cells[(model, term)]`` holds column values."""

    rows: tuple
    cols: tuple
    subcols: tuple
    cells: dict

    def cell(self, model, term):
        return self.cells.get((model, term), ("n/a",) * len(self.subcols))

    def to_markdown(self):
        head = ["Model"] + [f"{t} {s}" for t in self.cols for s in self.subcols]
        lines = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
        for m in self.rows:
            vals = [v for t in self.cols for v in self.cell(m, t)]
            lines.append("| " + " | ".join([m] + vals) + " |")
        return "\n".join(lines)


def _present(report):
    models = tuple(m for m in MODEL_ORDER if any(r.model == m for r in report.records))
    seen = {r.term for r in report.records}
    terms = tuple(t for t in TERM_ORDER if t in seen) + tuple(sorted(seen - set(TERM_ORDER)))
    return models, terms


def _mark(text, mean):
    if mean.n_failed and mean.n_ok:
        return f"{text} ({mean.n_failed} failed)"
    return "failed" if mean.n_failed else text


def summarize(report):
    """``(accuracy, timing)``: mean MAE/RMSE and mean execution-time grids.

    Rows follow SVR, SBC, BRNN (then FFNN) and columns VSTELF, STELF, MTELF,
    restricted to what the report contains. A combination without records is
    rendered ``n/a``; a cell whose runs all failed reads ``failed``.
    """
    if not report.records:
        raise EmptyReport("report holds no records")
    models, terms = _present(report)
    acc, tim = {}, {}
    for key, m in report.means.items():
        acc[key] = (_mark(fmt(m.mae), m), _mark(fmt(m.rmse), m))
        tim[key] = (_mark(f"{fmt(m.total_s)} s, {human_time(m.total_s)}" if m.n_ok else "n/a", m),)
    return Grid(models, terms, ("MAE", "RMSE"), acc), Grid(models, terms, ("time",), tim)


def render_markdown(report):
    accuracy, timing = summarize(report)
    lines = [
        "# Benchmark report",
        "",
        f"Master seed: {'unknown' if report.seed is None else report.seed}. Metrics are means over successful runs, in normalized [0, 1] target units.",
        "",
        "## Accuracy (mean of runs)",
        "",
        accuracy.to_markdown(),
        "",
        "## Execution time (mean training plus prediction wall time per run)",
        "",
        timing.to_markdown(),
        "",
    ]
    failed = [r for r in report.records if not r.ok]
    dropped = [r for r in report.records if r.dropped and r.model == report.records[0].model]
    if failed:
        lines += ["## Failed runs", ""]
        lines += [f"- {r.model} {r.term} run {r.run}: {r.error or ';'.join(r.flags)}" for r in failed]
        lines.append("")
    if dropped:
        lines += ["## Dropped all-zero columns", ""]
        lines += [f"- {r.term} run {r.run}: {', '.join(r.dropped)}" for r in dropped]
        lines.append("")
    return "\n".join(lines)


def write_report_md(report, path):
    Path(path).write_text(render_markdown(report), encoding="utf-8")


def _num(x):
    return "" if x is None or not math.isfinite(x) else repr(float(x))


def write_records_csv(report, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RECORD_HEADER)
        for r in report.records:
            w.writerow([r.model, r.term, r.run, r.offset, _num(r.mae), _num(r.rmse), _num(r.train_s),
                        _num(r.predict_s), ";".join(r.dropped), ";".join(r.flags)])


def _float(s):
    return float(s) if s else math.nan


def read_records_csv(path, seed=None):
    """Rebuild a report (without predictions) from ``records.csv``."""
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        rd = csv.DictReader(fh)
        if tuple(rd.fieldnames or ()) != RECORD_HEADER:
            raise ValueError(f"{path}: unexpected header {rd.fieldnames}")
        for row in rd:
            flags = tuple(f for f in row["flags"].split(";") if f)
            err = next((f for f in flags if f.startswith("error=")), "")
            records.append(RunRecord(
                row["model"], row["term"], int(row["run"]), int(row["offset"]),
                mae=_float(row["mae"]), rmse=_float(row["rmse"]),
                train_s=_float(row["train_s"]), predict_s=_float(row["predict_s"]),
                dropped=tuple(d for d in row["dropped"].split(";") if d), flags=flags, error=err,
            ))
    records.sort(key=_record_key)
    return BenchmarkReport(records, _means(records), {}, seed)


def prediction_path(out_dir, record):
    return Path(out_dir) / f"predictions_{record.model.lower()}_{record.term.lower()}_{record.run}.csv"


def write_predictions(path, actual, predicted):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("t", "actual", "predicted"))
        for t, (a, p) in enumerate(zip(actual.tolist(), predicted.tolist())):
            w.writerow((t, repr(a), repr(p)))


def write_outputs(report, out_dir):
    """``report.md``, ``records.csv`` and one prediction file per successful run."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_records_csv(report, out / "records.csv")
    write_report_md(report, out / "report.md")
    for r in report.records:
        if r.ok and r.predicted is not None:
            write_predictions(prediction_path(out, r), r.actual, r.predicted)
    return out
