"""Deterministic generators shared across the test suite."""

import string

from halfhc.distribution import SymbolDistribution
from halfhc.rng import SplitMix64, sample_symbols

SYMBOL_POOL = string.ascii_lowercase + string.ascii_uppercase


def random_distribution(rng: SplitMix64, n: int) -> SymbolDistribution:
    """Exact rational distribution from random integer weights."""
    weights = [rng.below(1_000_000) + 1 for _ in range(n)]
    return SymbolDistribution.from_weights(list(zip(SYMBOL_POOL, weights)))


def random_instance(rng: SplitMix64, max_classes: int) -> tuple[list[float], float]:
    """Float solver instance with non-positive coefficients."""
    m = 1 + rng.below(max_classes)
    coeffs = [-rng.random() for _ in range(m)]
    offset = rng.random() - 0.5
    return coeffs, offset


def zipf_corpus(rng: SplitMix64, n: int, length: int, exponent: float = 1.0) -> str:
    """Seeded iid corpus over n symbols with Zipf-like weights."""
    weights = [1.0 / (i + 1) ** exponent for i in range(n)]
    total = sum(weights)
    probs = [w / total for w in weights]
    return sample_symbols(rng, SYMBOL_POOL[:n], probs, length)
