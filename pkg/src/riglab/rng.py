"""Deterministic stream derivation for seeded, parallel experiments.

Every trial gets its own generator derived from ``(base_seed, index)`` by a
splitmix64-style hash, so results do not depend on how trials are
distributed over workers. Sweeps mix an extra axis index into the base
seed before deriving trial streams.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """One splitmix64 output step for the 64-bit state ``x``."""
    x = (x + _GOLDEN) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def mix64(a: int, b: int) -> int:
    """Hash two 64-bit values into one; order-sensitive."""
    return splitmix64((splitmix64(a & _MASK64) ^ (b & _MASK64)) & _MASK64)


@dataclass(frozen=True)
class RngStream:
    """A named position in the global stream space.

    Identical ``(seed, index)`` pairs yield identical draw sequences on
    every platform; distinct indices give statistically independent
    streams.
    """

    seed: int
    index: int = 0

    def key(self) -> int:
        return mix64(self.seed, self.index)

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.key()))

    def substream(self, tag: int) -> "RngStream":
        """Derive a child stream, e.g. one per component of a composed model."""
        return RngStream(self.key(), tag)
