"""Counter-keyed random streams.

Every random draw in the library comes from a generator keyed by a global
seed plus a tuple of integer counters (shot, round, stream id, ...), so the
same key always reproduces the same stream whichever worker runs it.
"""

from __future__ import annotations

import os
from typing import Optional

import numpy as np

SEED_ENV = "QECFORGE_SEED"
DEFAULT_SEED = 12345


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def make_rng(seed: Optional[int] = None, *keys: int) -> np.random.Generator:
    """Philox generator for ``(seed, *keys)``; ``seed=None`` reads ``QECFORGE_SEED``."""
    if seed is None:
        seed = default_seed()
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.Philox(ss))


__all__ = ["DEFAULT_SEED", "SEED_ENV", "default_seed", "make_rng"]
