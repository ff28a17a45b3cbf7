"""Deterministic random numbers for reproducible experiments.

Everything stochastic in this package (synthetic corpora, fair bit
streams, Monte Carlo checks) goes through splitmix64, so a seed fully
determines every run and the sequence can be reproduced in any language
from the published constants.
"""

from __future__ import annotations

from bisect import bisect_right
from typing import Sequence

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """splitmix64 generator (Steele, Lea and Vigna; Vigna's reference constants).

    64-bit state advanced by the golden-ratio increment 0x9E3779B97F4A7C15,
    output mixed with the murmur-style finalizer. Passes BigCrush; more than
    enough for synthetic corpora and Monte Carlo smoke checks.
    """

    def __init__(self, seed: int = 0):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform float in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (2.0**-53)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound). Modulo bias is negligible for bound << 2**64."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        return self.next_u64() % bound

    def bits(self, count: int) -> str:
        """A fair bit string of the given length, 64 bits per state advance."""
        if count < 0:
            raise ValueError("count must be non-negative")
        chunks = []
        remaining = count
        while remaining > 0:
            word = format(self.next_u64(), "064b")
            chunks.append(word if remaining >= 64 else word[:remaining])
            remaining -= 64
        return "".join(chunks)


def fair_bits(seed: int, count: int) -> str:
    """Seeded iid equiprobable bit string."""
    return SplitMix64(seed).bits(count)


def sample_symbols(
    rng: SplitMix64, symbols: Sequence[str], probs: Sequence[float], count: int
) -> str:
    """Draw an iid symbol string by inverse CDF over float cumulative weights."""
    if len(symbols) != len(probs):
        raise ValueError("symbols and probs must align")
    cumulative = []
    acc = 0.0
    for p in probs:
        acc += float(p)
        cumulative.append(acc)
    cumulative[-1] = 1.0  # absorb float rounding in the last bucket
    out = []
    for _ in range(count):
        idx = bisect_right(cumulative, rng.random())
        out.append(symbols[min(idx, len(symbols) - 1)])
    return "".join(out)
