"""Deterministic PRNG and shuffle used to generate battle arrangements.

Any client or sibling implementation must reproduce these permutations
bit-for-bit, so the generator is pinned down to exact integer arithmetic
instead of delegating to a platform ``random``:

* xorshift64* with shifts (12, 25, 27) and multiplier 0x2545F4914F6CDD1D,
  all arithmetic modulo 2**64,
* a zero seed is replaced by 0x9E3779B97F4A7C15 (the generator state must
  never be zero),
* Fisher-Yates runs from the top index down, drawing ``j = next() % (i+1)``.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_MULTIPLIER = 0x2545F4914F6CDD1D
_ZERO_SEED_REPLACEMENT = 0x9E3779B97F4A7C15


class XorShift64Star:
    """xorshift64* stream; next_u64() yields one 64-bit value per call."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = (seed & _MASK64) or _ZERO_SEED_REPLACEMENT

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & _MASK64
        x ^= x >> 27
        self.state = x
        return (x * _MULTIPLIER) & _MASK64

    def next_below(self, bound: int) -> int:
        """Value in [0, bound) via plain modulo; bias is irrelevant here,
        reproducibility is what matters."""
        return self.next_u64() % bound


def shuffled_permutation(n: int, seed: int) -> tuple[int, ...]:
    """Deterministic Fisher-Yates permutation of 1..n for a given seed."""
    values = list(range(1, n + 1))
    rng = XorShift64Star(seed)
    for i in range(n - 1, 0, -1):
        j = rng.next_below(i + 1)
        values[i], values[j] = values[j], values[i]
    return tuple(values)
