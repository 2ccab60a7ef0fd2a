"""Deterministic random streams.

Every stochastic choice in the package flows through the Philox 4x64
counter-based bit generator, keyed by the user-facing 64-bit seed, so a given
seed reproduces the same draws on every platform, process layout, and thread
count.
"""

from __future__ import annotations

import numpy as np

from .types import MAX_SEED


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Return the generator for `seed`; extra integers key an independent substream."""
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must fit in 64 unsigned bits, got {seed}")
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))
