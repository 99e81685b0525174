"""Seeded random streams.

Every random draw in the package goes through :func:`make_rng`, which builds a
``numpy.random.Generator`` on top of the Philox 4x64 counter-based bit
generator. The stream is keyed by ``SeedSequence(seed, spawn_key=stream)`` so
``make_rng(seed, 3)`` is an independent, reproducible child stream of
``seed``. Philox output is specified bit-for-bit, so seeds reproduce across
platforms and numpy versions that keep the ``Generator`` API stable.
"""

import numpy as np


def make_rng(seed, *stream):
    """Return a Philox-backed generator for ``seed`` and integer stream key."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))


def derive_seed(seed, *key):
    """A 63-bit child seed of ``seed`` for the integer path ``key``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(2, np.uint64)[0] >> np.uint64(1))
