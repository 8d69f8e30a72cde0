"""Reproducible random streams.

All randomness in the package flows through numpy Generators built here.
Parallel experiments derive one child stream per (grid index, trial index)
key, so results are identical no matter how trials are scheduled across
workers.
"""

from __future__ import annotations

import numpy as np


def make_rng(seed: int) -> np.random.Generator:
    """Root generator for a master seed."""
    return np.random.default_rng(np.random.SeedSequence(seed))


def child_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent child stream for a master seed and an integer key path.

    ``child_rng(s, i, j)`` is deterministic in (s, i, j) and statistically
    independent of every other key path, which keeps worker scheduling out
    of the results.
    """
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))
