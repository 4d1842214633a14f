"""Seed plumbing: every random stream is a child of one master seed."""

import numpy as np


def seed_sequence(seed, *key: int) -> np.random.SeedSequence:
    """
    SeedSequence for `seed` extended by a spawn key.

    Unlike SeedSequence.spawn() this never mutates its argument, so the same
    (seed, key) pair always yields the same stream regardless of call order.

    Args:
        seed: int or SeedSequence
        key: Extra non-negative integers identifying the stream (epoch, batch, ...)
    """
    if isinstance(seed, np.random.SeedSequence):
        return np.random.SeedSequence(seed.entropy, spawn_key=tuple(seed.spawn_key) + key)
    return np.random.SeedSequence(seed, spawn_key=key)
