import numpy as np
import pytest

from homeload.data import DEFAULT_SCHEMA, TimeSeriesFrame, generate_synthetic


@pytest.fixture(scope="session")
def two_days():
    return generate_synthetic(2, 3)


def make_frame(values, step=1, start="2021-01-01T00:00:00"):
    """Frame with the default schema from a (n, 9) array (last column is the target)."""
    values = np.asarray(values, dtype=float)
    ts = np.datetime64(start, "s") + np.arange(len(values)) * np.timedelta64(60 * step, "s")
    return TimeSeriesFrame(ts, values, DEFAULT_SCHEMA.names, DEFAULT_SCHEMA.units, "total_w", step)


@pytest.fixture
def frame_factory():
    return make_frame


ACCEPTANCE = {}
N_CRITERIA = 11


def record_criterion(number, ok, detail):
    """Store one acceptance verdict; printed in the terminal summary."""
    ACCEPTANCE[number] = (bool(ok), detail)


def pytest_terminal_summary(terminalreporter):
    if not any(item.nodeid.startswith("tests/test_acceptance.py") for item in terminalreporter.stats.get("passed", [])
               + terminalreporter.stats.get("failed", [])):
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in range(1, N_CRITERIA + 1):
        ok, detail = ACCEPTANCE.get(n, (False, "not evaluated"))
        tr.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}: {detail}")
