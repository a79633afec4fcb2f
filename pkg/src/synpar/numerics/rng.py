"""Seeded generator with a fixed, platform-independent stream.

The recurrence is SplitMix64 (Steele, Lea & Flood 2014)::

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    out = z ^ (z >> 31)

all arithmetic modulo 2**64. Doubles in [0, 1) are ``(out >> 11) * 2**-53``.
numpy's Generator is not used because its stream is not promised stable
across numpy releases.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_INV53 = 1.0 / 9007199254740992.0


@njit(cache=True)
def _fill_unit(state, out):
    s = state
    for idx in range(out.size):
        s = s + _GOLDEN
        z = s
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        z = z ^ (z >> np.uint64(31))
        out[idx] = np.float64(z >> np.uint64(11)) * _INV53
    return s


@njit(cache=True)
def _fill_u64(state, out):
    s = state
    for idx in range(out.size):
        s = s + _GOLDEN
        z = s
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        out[idx] = z ^ (z >> np.uint64(31))
    return s


class Rng:
    def __init__(self, seed: int = 0):
        self.seed = int(seed)
        self.state = np.uint64(self.seed & 0xFFFFFFFFFFFFFFFF)

    def random(self, size=None):
        """Uniform doubles in [0, 1)."""
        out = np.empty(1 if size is None else size, dtype=np.float64)
        self.state = np.uint64(_fill_unit(self.state, out.reshape(-1)))
        return float(out[0]) if size is None else out

    def uniform(self, lo: float, hi: float, size=None):
        u = self.random(size)
        return lo + (hi - lo) * u

    def next_u64(self, size: int) -> np.ndarray:
        out = np.empty(size, dtype=np.uint64)
        self.state = np.uint64(_fill_u64(self.state, out))
        return out

    def integers(self, lo: int, hi: int, size=None):
        """Integers in [lo, hi); multiply-shift on the top 53 bits, so tiny bias is accepted."""
        if hi <= lo:
            raise ValueError(f"empty integer range [{lo}, {hi})")
        u = self.random(size)
        vals = lo + np.floor(u * (hi - lo)).astype(np.int64)
        return int(vals) if size is None else vals

    def __repr__(self):
        return f"Rng(seed={self.seed})"
