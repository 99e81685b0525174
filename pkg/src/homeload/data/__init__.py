"""Ingestion, synthesis, resampling, cleaning, normalization and windowing."""

from .frame import (
    DEFAULT_SCHEMA,
    DEVICE_COLUMNS,
    ColumnSchema,
    TimeSeriesFrame,
    drop_zero_columns,
    load_csv,
    resample_mean,
    write_csv,
    zero_columns,
)
from .scaling import (
    ColumnRange,
    NormalizationMap,
    UnitIntervalScaler,
    apply_minmax,
    fit_minmax,
    invert_minmax,
)
from .synthetic import generate_synthetic
from .windows import (
    DEFAULT_TERMS,
    TERM_ORDER,
    SequenceSet,
    SupervisedSet,
    TermConfig,
    Window,
    build_sequences,
    make_sequences,
    make_supervised,
    sample_windows,
)

__all__ = [
    "DEFAULT_SCHEMA", "DEVICE_COLUMNS", "ColumnSchema", "TimeSeriesFrame", "drop_zero_columns",
    "load_csv", "resample_mean", "write_csv", "zero_columns", "ColumnRange", "NormalizationMap",
    "UnitIntervalScaler", "apply_minmax", "fit_minmax", "invert_minmax", "generate_synthetic",
    "DEFAULT_TERMS", "TERM_ORDER", "SequenceSet", "SupervisedSet", "TermConfig", "Window",
    "build_sequences", "make_sequences", "make_supervised", "sample_windows",
]
