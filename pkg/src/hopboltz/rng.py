"""Counter-based SplitMix64 stream.

Output ``i`` of a stream with seed ``s`` is ``mix(s + (i + 1) * GAMMA)`` with the
standard SplitMix64 finaliser, so any position can be evaluated directly and
blocks of draws vectorise. Seed 0 gives the published reference sequence
0xe220a8397b1dcdaf, 0x6e789e6aa1b965f4, 0x06c45d188009454f, ...

Uniforms are ``(z >> 11) * 2**-53``, i.e. 53-bit floats in [0, 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

GAMMA = 0x9E3779B97F4A7C15
MASK64 = (1 << 64) - 1
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_INV53 = 2.0**-53


def splitmix64(seed: int, position: int) -> int:
    z = (seed + (position + 1) * GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def splitmix64_block(seed: int, start: int, count: int) -> np.ndarray:
    """Raw 64-bit outputs at positions ``start .. start+count-1``."""
    i = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    # uint64 array arithmetic wraps modulo 2**64
    z = np.uint64(seed & MASK64) + i * np.uint64(GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


@dataclass(frozen=True)
class RngStream:
    """Immutable (seed, position) pair. Drawing returns the value and the advanced stream."""

    seed: int
    position: int = 0

    def __post_init__(self):
        if not 0 <= self.seed <= MASK64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.position < 0:
            raise ValueError("position must be non-negative")

    def raw(self) -> tuple[int, RngStream]:
        return splitmix64(self.seed, self.position), RngStream(self.seed, self.position + 1)

    def uniform(self) -> tuple[float, RngStream]:
        z, nxt = self.raw()
        return (z >> 11) * _INV53, nxt

    def uniforms(self, count: int) -> tuple[np.ndarray, RngStream]:
        z = splitmix64_block(self.seed, self.position, count)
        u = (z >> np.uint64(11)).astype(np.float64) * _INV53
        return u, RngStream(self.seed, self.position + count)

    def below(self, n: int) -> tuple[int, RngStream]:
        """Integer uniform on 0..n-1 from a single draw, as ``floor(u * n)``."""
        u, nxt = self.uniform()
        return min(int(u * n), n - 1), nxt
