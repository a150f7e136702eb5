"""Seeded random streams.

Every random draw comes from a Philox (counter-based) generator keyed by
``(master seed, purpose tag, index)``, so a replicate's draws do not depend on
how many other replicates ran before it or in which order.
"""

from __future__ import annotations

import zlib

import numpy as np


def stream(seed: int, tag: str, index: int = 0) -> np.random.Generator:
    if seed < 0 or index < 0:
        raise ValueError("seed and index must be nonnegative")
    key = np.random.SeedSequence([int(seed), zlib.crc32(tag.encode("utf-8")), int(index)])
    return np.random.Generator(np.random.Philox(key))


def uniform_design(seed: int, index: int, n: int, tag: str = "design") -> np.ndarray:
    """``n`` i.i.d. uniform points on [0, 1] for replicate ``index``."""
    return stream(seed, tag, index).uniform(0.0, 1.0, size=n)
