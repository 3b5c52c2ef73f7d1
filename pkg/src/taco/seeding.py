"""Deterministic RNG derivation.

All randomness in a run flows from one integer seed. Sub-streams (per sample,
per episode, per worker) are derived with SeedSequence so results do not
depend on draw order, process boundaries, or Python's randomized hashing.
"""

from __future__ import annotations

import numpy as np


def derive_rng(*keys: int) -> np.random.Generator:
    """Independent generator for the given key path, e.g. (seed, step, slot)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(list(keys))))


def derive_seed(*keys: int) -> int:
    """Stable 63-bit integer seed for the given key path."""
    state = np.random.SeedSequence(list(keys)).generate_state(2, dtype=np.uint32)
    return int(state[0]) << 31 | int(state[1] >> 1)
