"""SplitMix64 with index-derived substreams.

Bit-exact definition (all arithmetic mod 2^64):

    next():  state += 0x9E3779B97F4A7C15
             z = state
             z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
             z = (z ^ (z >> 27)) * 0x94D049BB133111EB
             return z ^ (z >> 31)

A substream for (seed, label, index) starts from the state
``mix(mix(seed ^ fnv1a64(label)) + index * 0x9E3779B97F4A7C15)`` where
``mix`` is the three-line finaliser above.  Doubles in [0, 1) are
``(next() >> 11) * 2^-53``.
"""

from __future__ import annotations

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def fnv1a64(label: str) -> int:
    h = 0xCBF29CE484222325
    for byte in label.encode("utf-8"):
        h = ((h ^ byte) * 0x100000001B3) & MASK
    return h


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK

    @classmethod
    def substream(cls, seed: int, label: str, index: int) -> "SplitMix64":
        base = mix64((seed & MASK) ^ fnv1a64(label))
        return cls(mix64(base + (index * GOLDEN & MASK)))

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK
        return mix64(self.state)

    def random(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform(self, a: float, b: float) -> float:
        return a + (b - a) * self.random()

    def randint(self, a: int, b: int) -> int:
        """Uniform integer in [a, b] by rejection (no modulo bias)."""
        span = b - a + 1
        if span <= 0:
            raise ValueError("empty range")
        limit = (1 << 64) - ((1 << 64) % span)
        while True:
            u = self.next_u64()
            if u < limit:
                return a + u % span
