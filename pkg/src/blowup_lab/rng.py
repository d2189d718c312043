"""Deterministic counter-based randomness (SplitMix64 output function).

Every random quantity in this package is a pure function of a 64-bit seed
and a stream index, so results are identical across platforms, run order,
and worker counts.  The k-th word of the stream keyed by `seed` is
mix64(seed + (k+1) * PHI) computed in wrapping 64-bit arithmetic, where
mix64 is the SplitMix64 finalizer.  Generators record the identifier below
in every label and report.
"""

from __future__ import annotations

import numpy as np

ALGORITHM = "splitmix64"

_MASK = (1 << 64) - 1
_PHI = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """SplitMix64 finalizer: a bijective scramble of a 64-bit word."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * _M1) & _MASK
    z = ((z ^ (z >> 27)) * _M2) & _MASK
    return z ^ (z >> 31)


def word(seed: int, index: int) -> int:
    """The index-th 64-bit word of the stream keyed by seed."""
    return mix64((seed + (index + 1) * _PHI) & _MASK)


def words(seed: int, start: int, count: int) -> np.ndarray:
    """Vectorized stream slice: words(seed, s, c)[i] == word(seed, s + i)."""
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = np.uint64(seed & _MASK) + idx * np.uint64(_PHI)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def bernoulli_threshold(p: float) -> int:
    """Integer threshold so that (word < threshold) has probability p.

    Exact for p in {0, 1}; otherwise off by at most 2**-64.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p!r} outside [0, 1]")
    return int(p * 2**64)
