"""Portable counter-based pseudo-random numbers (splitmix64).

The random-rezoning experiments must be reproducible byte-for-byte across
platforms and runs, independent of thread count. splitmix64 is a stateless
mixing function, so draws can be generated as a vectorized map over a
counter; the generator below keeps a running counter to hand out
non-overlapping blocks.
"""

from __future__ import annotations

import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    """Deterministic uniform generator over a 64-bit counter stream."""

    def __init__(self, seed: int):
        self.seed = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
        self._counter = 0

    def uniform_centered(self, shape) -> np.ndarray:
        """Draw uniform(-0.5, 0.5) values of the given shape."""
        n = int(np.prod(shape)) if shape else 1
        ks = np.arange(self._counter + 1, self._counter + n + 1, dtype=np.uint64)
        self._counter += n
        with np.errstate(over="ignore"):
            z = _mix(self.seed + ks * _GAMMA)
        u = (z >> np.uint64(11)).astype(np.float64) * 2.0**-53
        return (u - 0.5).reshape(shape)

    def spawn(self, tag: int) -> "SplitMix64":
        """Derive an independent stream, e.g. one per trial."""
        with np.errstate(over="ignore"):
            child = _mix(self.seed + np.uint64(tag + 1) * _MIX1)
        return SplitMix64(int(child))
