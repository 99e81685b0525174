"""Metrics, the windowed benchmark and its reports."""

from .benchmark import (
    MODEL_ORDER,
    BenchmarkConfig,
    BenchmarkReport,
    CellMean,
    ModelSettings,
    NetSettings,
    PreparedWindow,
    RunRecord,
    fit_model,
    predict_model,
    prepare_window,
    run_benchmark,
    run_cell,
)
from .metrics import MetricPair, mae, rmse, time_run
from .report import (
    RECORD_HEADER,
    Grid,
    fmt,
    human_time,
    read_records_csv,
    render_markdown,
    summarize,
    write_outputs,
    write_predictions,
    write_records_csv,
    write_report_md,
)

__all__ = [
    "MODEL_ORDER", "BenchmarkConfig", "BenchmarkReport", "CellMean", "ModelSettings", "NetSettings",
    "PreparedWindow", "RunRecord", "fit_model", "predict_model", "prepare_window", "run_benchmark",
    "run_cell", "MetricPair", "mae", "rmse", "time_run", "RECORD_HEADER", "Grid", "fmt",
    "human_time", "read_records_csv", "render_markdown", "summarize", "write_outputs",
    "write_predictions", "write_records_csv", "write_report_md",
]
