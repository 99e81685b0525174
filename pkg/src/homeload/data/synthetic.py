"""Synthetic stand-in for the smart-home minute log.

Weather columns are smooth daily and seasonal cycles plus AR(1) noise. Each
appliance is an alternating on/off renewal process with geometric durations,
gated by a time-of-day activity window, so columns are sparse with long runs
of exact zeros. Powers are quantized to 0.25 W; with that grid the float sum
of the six devices is exact, and ``total_w`` equals it bit for bit.
"""

import numpy as np
from scipy.signal import lfilter

from .._rng import make_rng
from .frame import DEFAULT_SCHEMA, TimeSeriesFrame

START = np.datetime64("2020-10-01T00:00:00", "s")

# name: (mean on min, mean off min, spell shape, level W, relative jitter, active hours)
# shape 1 gives memoryless (geometric) spells; larger shapes give regular cycles.
DEVICES = {
    "light_living_w": (120, 45, 1, 65.0, 0.03, [(6, 8), (17, 23)]),
    "light_kitchen_w": (40, 70, 1, 42.0, 0.03, [(6, 9), (11, 14), (17, 22)]),
    "washer_w": (70, 2400, 4, 1500.0, 0.15, [(8, 21)]),
    "fridge_w": (20, 40, 8, 110.0, 0.05, [(0, 24)]),
    "microwave_w": (4, 240, 1, 1100.0, 0.05, [(7, 9), (12, 13), (18, 20)]),
    "fans_w": (150, 240, 1, 48.0, 0.05, [(10, 20)]),
}


def _spells(rng, mean, shape, k):
    if shape == 1:
        return rng.geometric(1.0 / mean, size=k)
    return np.maximum(1, np.round(rng.gamma(shape, mean / shape, size=k))).astype(np.int64)


def _onoff(rng, n, mean_on, mean_off, shape=1):
    """Boolean on/off trace of length ``n`` from alternating random spells."""
    cycle = mean_on + mean_off
    k = int(2 * n / cycle) + 16
    while True:
        on = _spells(rng, mean_on, shape, k)
        off = _spells(rng, mean_off, shape, k)
        spells = np.empty(2 * k, dtype=np.int64)
        first_on = rng.random() < mean_on / cycle
        spells[0::2], spells[1::2] = (on, off) if first_on else (off, on)
        if spells.sum() >= n:
            break
        k *= 2
    state = np.zeros(2 * k, dtype=bool)
    state[0::2] = first_on
    state[1::2] = not first_on
    return np.repeat(state, spells)[:n]


def _quantize(w):
    return np.round(np.maximum(w, 0.0) * 4.0) / 4.0


def generate_synthetic(days, seed):
    """Generate ``days`` x 1440 one-minute rows with the default schema.

    Deterministic in ``(days, seed)``: each column draws from its own Philox
    stream keyed by the column index.
    """
    if days < 1:
        raise ValueError("days must be >= 1")
    n = int(days) * 1440
    minute = np.arange(n)
    hour = (minute % 1440) / 60.0
    day = minute / 1440.0

    rng = make_rng(seed, 0)
    # AR(1) with phi close to 1 gives slow weather drift
    noise = lfilter([1.0], [1.0, -0.998], rng.normal(0.0, 0.05, size=n))
    temp = (
        16.0
        - 5.0 * np.sin(2 * np.pi * day / 365.0)
        + 6.0 * np.sin(2 * np.pi * (hour - 9.0) / 24.0)
        + noise
    )
    rng = make_rng(seed, 1)
    hum = 62.0 - 1.8 * (temp - 16.0) + rng.normal(0.0, 1.5, size=n)
    cols = {
        "temp_out_c": np.round(temp, 2),
        "humidity_pct": np.round(np.clip(hum, 5.0, 100.0), 2),
    }

    for j, (name, (m_on, m_off, shape, level, jitter, windows)) in enumerate(DEVICES.items()):
        rng = make_rng(seed, 2 + j)
        active = np.zeros(n, dtype=bool)
        for lo, hi in windows:
            active |= (hour >= lo) & (hour < hi)
        on = _onoff(rng, n, m_on, m_off, shape) & active
        watts = level * (1.0 + jitter * rng.standard_normal(n))
        cols[name] = np.where(on, _quantize(watts), 0.0)

    total = np.zeros(n)
    for name in DEVICES:
        total = total + cols[name]
    cols["total_w"] = total

    values = np.column_stack([cols[name] for name in DEFAULT_SCHEMA.names])
    stamps = START + minute.astype("timedelta64[m]")
    return TimeSeriesFrame(
        stamps, values, DEFAULT_SCHEMA.names, DEFAULT_SCHEMA.units, DEFAULT_SCHEMA.target[0], 1
    )
