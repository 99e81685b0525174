"""Timestamped multivariate frames, CSV I/O and row/column transforms."""

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..exceptions import (
    AllInputsDropped,
    DataError,
    EmptyFrame,
    IncompatiblePeriod,
    IrregularStep,
    MissingColumn,
    NonMonotonicTimestamp,
    ParseError,
)


@dataclass(frozen=True)
class ColumnSchema:
    """Expected CSV layout: timestamp column, 8 inputs and 1 target."""

    inputs: tuple = (
        ("temp_out_c", "degC"),
        ("humidity_pct", "%"),
        ("light_living_w", "W"),
        ("light_kitchen_w", "W"),
        ("washer_w", "W"),
        ("fridge_w", "W"),
        ("microwave_w", "W"),
        ("fans_w", "W"),
    )
    target: tuple = ("total_w", "W")
    timestamp: str = "timestamp"

    @property
    def input_names(self):
        return tuple(name for name, _ in self.inputs)

    @property
    def names(self):
        return self.input_names + (self.target[0],)

    @property
    def units(self):
        return tuple(unit for _, unit in self.inputs) + (self.target[1],)

    @property
    def header(self):
        return (self.timestamp,) + self.names


DEFAULT_SCHEMA = ColumnSchema()
DEVICE_COLUMNS = DEFAULT_SCHEMA.input_names[2:]


def _readonly(a):
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class TimeSeriesFrame:
    """Immutable matrix of named columns on a uniform minute grid.

    Parameters
    ----------
    timestamps : array of datetime64
        Strictly increasing instants, ``step_minutes`` apart.
    values : ndarray of shape (n_rows, n_columns)
        Column-major content; column ``j`` is named ``names[j]``.
    names, units : tuple of str
    target_name : str
        Name of the single target column.
    step_minutes : int
        Nominal sampling step.
    """

    timestamps: np.ndarray
    values: np.ndarray
    names: tuple
    units: tuple
    target_name: str
    step_minutes: int = 1
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ts = _readonly(np.asarray(self.timestamps, dtype="datetime64[s]"))
        vals = _readonly(np.asarray(self.values, dtype=float).reshape(len(ts), len(self.names)))
        object.__setattr__(self, "timestamps", ts)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "units", tuple(self.units))
        if vals.shape[1] != len(self.names) or len(self.units) != len(self.names):
            raise DataError("names, units and value columns disagree in length")
        if len(set(self.names)) != len(self.names):
            raise DataError("duplicate column names")
        if self.names.count(self.target_name) != 1:
            raise DataError(f"target {self.target_name!r} must name exactly one column")
        if len(ts) > 1:
            steps = np.diff(ts).astype(np.int64)
            if np.any(steps <= 0):
                raise NonMonotonicTimestamp(int(np.argmax(steps <= 0)) + 2)
            if np.any(steps != self.step_minutes * 60):
                raise IrregularStep(int(np.argmax(steps != self.step_minutes * 60)) + 2)
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.names)})

    def __len__(self):
        return len(self.timestamps)

    @property
    def input_names(self):
        return tuple(n for n in self.names if n != self.target_name)

    def column(self, name):
        try:
            return self.values[:, self._index[name]]
        except KeyError:
            raise MissingColumn(name) from None

    @property
    def inputs(self):
        """Input-attribute matrix of shape (n_rows, n_inputs)."""
        idx = [self._index[n] for n in self.input_names]
        return self.values[:, idx]

    @property
    def target(self):
        return self.column(self.target_name)

    def rows(self, start, stop):
        """Contiguous row slice ``[start, stop)`` as a new frame."""
        return self.replace(timestamps=self.timestamps[start:stop], values=self.values[start:stop])

    def select(self, names):
        """Keep only ``names`` (in the given order); the target must be included."""
        idx = [self._index[n] if n in self._index else _missing(n) for n in names]
        return self.replace(
            values=self.values[:, idx],
            names=tuple(names),
            units=tuple(self.units[i] for i in idx),
        )

    def replace(self, **changes):
        kwargs = dict(
            timestamps=self.timestamps,
            values=self.values,
            names=self.names,
            units=self.units,
            target_name=self.target_name,
            step_minutes=self.step_minutes,
        )
        kwargs.update(changes)
        return TimeSeriesFrame(**kwargs)

    def equals(self, other):
        return (
            self.names == other.names
            and self.units == other.units
            and self.target_name == other.target_name
            and self.step_minutes == other.step_minutes
            and np.array_equal(self.timestamps, other.timestamps)
            and np.array_equal(self.values, other.values)
        )


def _missing(name):
    raise MissingColumn(name)


def load_csv(path, schema=DEFAULT_SCHEMA):
    """Read a minute-grid CSV into a frame ordered as ``schema``.

    Row numbers in errors are 1-based data rows (the header is row 0), so the
    file line is ``row + 1``. Extra columns are ignored.

    Raises
    ------
    MissingColumn, ParseError, NonMonotonicTimestamp, IrregularStep
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise EmptyFrame(f"{path} has no header row") from None
        for name in schema.header:
            if name not in header:
                raise MissingColumn(name)
        pos = [header.index(name) for name in schema.header]
        stamps, rows = [], []
        for rownum, rec in enumerate(reader, start=1):
            if not rec:
                continue
            if len(rec) < len(header):
                raise ParseError(rownum, header[len(rec)])
            try:
                stamps.append(np.datetime64(rec[pos[0]].strip(), "s"))
            except ValueError:
                raise ParseError(rownum, schema.timestamp) from None
            row = []
            for name, p in zip(schema.names, pos[1:]):
                try:
                    row.append(float(rec[p]))
                except ValueError:
                    raise ParseError(rownum, name) from None
            rows.append(row)
    if not rows:
        raise EmptyFrame(f"{path} has no data rows")
    ts = np.array(stamps, dtype="datetime64[s]")
    steps = np.diff(ts).astype(np.int64)
    if np.any(steps <= 0):
        raise NonMonotonicTimestamp(int(np.argmax(steps <= 0)) + 2)
    step = int(steps[0]) if len(steps) else 60
    if step % 60:
        raise IrregularStep(2)
    values = np.array(rows, dtype=float)
    if not np.all(np.isfinite(values)):
        r, c = np.argwhere(~np.isfinite(values))[0]
        raise ParseError(int(r) + 1, schema.names[c])
    return TimeSeriesFrame(ts, values, schema.names, schema.units, schema.target[0], step // 60)


def write_csv(frame, path, schema=DEFAULT_SCHEMA):
    """Write ``frame`` with the schema header; floats use shortest round-trip repr."""
    path = Path(path)
    stamps = np.datetime_as_string(frame.timestamps, unit="s")
    cols = frame.select(schema.names).values.tolist()
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(schema.header)
        for ts, row in zip(stamps, cols):
            w.writerow([ts] + [repr(v) for v in row])
    return len(cols)


def resample_mean(frame, period_minutes):
    """Average consecutive blocks of ``period_minutes``; trailing partial block dropped."""
    if period_minutes < frame.step_minutes or period_minutes % frame.step_minutes:
        raise IncompatiblePeriod(
            f"period {period_minutes} min is not a multiple of step {frame.step_minutes} min"
        )
    k = period_minutes // frame.step_minutes
    if k == 1:
        return frame
    nb = len(frame) // k
    vals = frame.values[: nb * k].reshape(nb, k, -1).mean(axis=1)
    return frame.replace(
        timestamps=frame.timestamps[: nb * k : k], values=vals, step_minutes=period_minutes
    )


def zero_columns(frame):
    """Names of input columns whose values are all exactly zero."""
    return [n for n in frame.input_names if not np.any(frame.column(n) != 0.0)]


def drop_zero_columns(frame):
    """Remove all-zero input columns; returns ``(frame, dropped_names)``.

    The target is never dropped. Raises :class:`AllInputsDropped` when nothing
    is left to learn from.
    """
    dropped = zero_columns(frame)
    if not dropped:
        return frame, []
    keep = [n for n in frame.names if n not in dropped]
    if len(keep) == 1:
        raise AllInputsDropped("every input column is identically zero")
    return frame.select(keep), dropped
