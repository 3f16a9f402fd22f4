"""Seeded random streams.

Every random draw in the package comes from numpy's PCG64 generator.
Independent sub-streams are derived with ``SeedSequence(base_seed,
spawn_key=keys)``, where ``keys`` is a tuple of non-negative integers such as
``(node_count, trial_index, purpose)``. The same keys always give the same
stream, and distinct keys give statistically independent streams.
"""
from __future__ import annotations

import numpy as np

GENERATOR = "PCG64"

# purpose codes used as the last spawn key
GRAPH = 0
SIGNALS = 1
SUBSAMPLE = 2


def substream(base_seed, *keys):
    keys = tuple(int(k) for k in keys)
    if any(k < 0 for k in keys):
        raise ValueError("spawn keys must be non-negative")
    seq = np.random.SeedSequence(int(base_seed), spawn_key=keys)
    return np.random.Generator(np.random.PCG64(seq))
