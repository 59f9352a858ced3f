"""Deterministic random-number streams.

Every stochastic routine in this package derives its generator from a master
seed and an integer path::

    stream(master_seed, *path) == Generator(PCG64(SeedSequence(master_seed, spawn_key=path)))

SeedSequence spawn keys give statistically independent, collision-free
streams, so the mapping (seed, path) -> draws is a cross-run, cross-platform
contract: the same seed produces the same lattices, assignments and
activation samples regardless of thread count or execution order.
"""

from __future__ import annotations

import numpy as np

_UINT64 = 0xFFFFFFFFFFFFFFFF


def stream(master_seed: int, *path: int) -> np.random.Generator:
    """Return the PCG64 generator for a (seed, path) pair."""
    ss = np.random.SeedSequence(
        int(master_seed) & _UINT64, spawn_key=tuple(int(p) & _UINT64 for p in path)
    )
    return np.random.Generator(np.random.PCG64(ss))


def substream_seed(master_seed: int, *path: int) -> int:
    """A 63-bit integer seed derived from (master_seed, path).

    Used when an API takes a plain integer seed but must be driven from a
    parent stream (e.g. one lattice seed per disorder realization).
    """
    return int(stream(master_seed, *path).integers(1 << 63))
