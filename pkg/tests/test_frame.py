import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homeload.data import (
    DEFAULT_SCHEMA,
    drop_zero_columns,
    generate_synthetic,
    load_csv,
    resample_mean,
    write_csv,
    zero_columns,
)
from homeload.exceptions import (
    AllInputsDropped,
    IncompatiblePeriod,
    IrregularStep,
    MissingColumn,
    NonMonotonicTimestamp,
    ParseError,
)


def test_schema_shape():
    assert len(DEFAULT_SCHEMA.input_names) == 8
    assert DEFAULT_SCHEMA.header == (
        "timestamp", "temp_out_c", "humidity_pct", "light_living_w", "light_kitchen_w",
        "washer_w", "fridge_w", "microwave_w", "fans_w", "total_w",
    )


def test_csv_round_trip(tmp_path, two_days):
    part = two_days.rows(0, 70)
    n = write_csv(part, tmp_path / "a.csv")
    back = load_csv(tmp_path / "a.csv")
    assert n == 70 and len(back) == 70 and back.values.shape == (70, 9)
    assert back.equals(part)


def _lines(tmp_path, two_days, rows=10):
    write_csv(two_days.rows(0, rows), tmp_path / "a.csv")
    return (tmp_path / "a.csv").read_text().splitlines()


def test_missing_column(tmp_path, two_days):
    lines = _lines(tmp_path, two_days)
    cols = lines[0].split(",")
    k = cols.index("microwave_w")
    out = [",".join(c for j, c in enumerate(ln.split(",")) if j != k) for ln in lines]
    (tmp_path / "b.csv").write_text("\n".join(out) + "\n")
    with pytest.raises(MissingColumn) as exc:
        load_csv(tmp_path / "b.csv")
    assert exc.value.name == "microwave_w"


def test_timestamp_backwards_row_number(tmp_path, two_days):
    lines = _lines(tmp_path, two_days)
    # data row 5 gets the timestamp of data row 3
    fields = lines[5].split(",")
    fields[0] = lines[3].split(",")[0]
    lines[5] = ",".join(fields)
    (tmp_path / "b.csv").write_text("\n".join(lines) + "\n")
    with pytest.raises(NonMonotonicTimestamp) as exc:
        load_csv(tmp_path / "b.csv")
    assert exc.value.row == 5


def test_parse_error_location(tmp_path, two_days):
    lines = _lines(tmp_path, two_days)
    fields = lines[4].split(",")
    fields[2] = "wet"
    lines[4] = ",".join(fields)
    (tmp_path / "b.csv").write_text("\n".join(lines) + "\n")
    with pytest.raises(ParseError) as exc:
        load_csv(tmp_path / "b.csv")
    assert (exc.value.row, exc.value.col) == (4, "humidity_pct")


def test_gap_is_irregular(tmp_path, two_days):
    lines = _lines(tmp_path, two_days)
    del lines[6]
    (tmp_path / "b.csv").write_text("\n".join(lines) + "\n")
    with pytest.raises(IrregularStep):
        load_csv(tmp_path / "b.csv")


def test_resample_examples(frame_factory):
    f = frame_factory(np.ones((10, 9)))
    r = resample_mean(f, 10)
    assert len(r) == 1 and np.all(r.values == 1.0)
    v = np.zeros((10, 9))
    v[:, 0] = np.arange(10)
    assert resample_mean(frame_factory(v), 10).values[0, 0] == 4.5
    r = resample_mean(frame_factory(np.ones((25, 9))), 10)
    assert len(r) == 2 and r.step_minutes == 10
    assert r.timestamps[1] - r.timestamps[0] == np.timedelta64(600, "s")


def test_resample_incompatible(frame_factory):
    f = resample_mean(frame_factory(np.ones((40, 9))), 10)
    with pytest.raises(IncompatiblePeriod):
        resample_mean(f, 15)
    with pytest.raises(IncompatiblePeriod):
        resample_mean(f, 5)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5), st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_resample_preserves_block_means(blocks, k, seed):
    v = np.random.default_rng(seed).random((blocks * k + 1, 9))
    from conftest import make_frame
    r = resample_mean(make_frame(v), k)
    assert np.allclose(r.values.mean(axis=0), v[: blocks * k].mean(axis=0), atol=1e-12)


def test_drop_zero_columns(frame_factory):
    v = np.random.default_rng(0).random((20, 9)) + 0.1
    f = frame_factory(v)
    same, dropped = drop_zero_columns(f)
    assert dropped == [] and same is f
    v[:, 6] = 0.0
    out, dropped = drop_zero_columns(frame_factory(v))
    assert dropped == ["microwave_w"] and "microwave_w" not in out.names
    v[:, 2] = 0.0
    out, dropped = drop_zero_columns(frame_factory(v))
    assert len(out.input_names) == 6 and set(dropped) == {"light_living_w", "microwave_w"}
    again, none = drop_zero_columns(out)
    assert none == [] and again.equals(out)


def test_target_never_dropped(frame_factory):
    v = np.ones((5, 9))
    v[:, 8] = 0.0
    out, dropped = drop_zero_columns(frame_factory(v))
    assert dropped == [] and "total_w" in out.names
    v[:, :8] = 0.0
    with pytest.raises(AllInputsDropped):
        drop_zero_columns(frame_factory(v))
    assert zero_columns(frame_factory(v)) == list(DEFAULT_SCHEMA.input_names)


def test_frame_is_read_only(two_days):
    with pytest.raises(ValueError):
        two_days.values[0, 0] = 1.0
