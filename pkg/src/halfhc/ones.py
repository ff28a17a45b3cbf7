"""Ones-rate statistics of codes and bit streams, with a Wald interval.

The interval uses the MLE normal approximation for a Bernoulli
proportion. The normal quantile is computed locally (Acklam's rational
approximation plus one Halley refinement against erfc), so no statistics
dependency is needed and results reproduce bit-for-bit across platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

HALF = Fraction(1, 2)

# Acklam's inverse normal CDF coefficients (relative error < 1.15e-9 before
# refinement; the Halley step below pushes it near machine precision).
_A = (
    -3.969683028665376e01,
    2.209460984245205e02,
    -2.759285104469687e02,
    1.383577518672690e02,
    -3.066479806614716e01,
    2.506628277459239e00,
)
_B = (
    -5.447609879822406e01,
    1.615858368580409e02,
    -1.556989798598866e02,
    6.680131188771972e01,
    -1.328068155288572e01,
)
_C = (
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e00,
    -2.549732539343734e00,
    4.374664141464968e00,
    2.938163982698783e00,
)
_D = (
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e00,
    3.754408661907416e00,
)
_P_LOW = 0.02425


def normal_quantile(p: float) -> float:
    """Standard normal quantile, |error| well below 1e-8 over (0, 1)."""
    if not 0.0 < p < 1.0:
        raise ValueError("quantile argument must be strictly inside (0, 1)")
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        x = (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / (
            (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        )
    elif p <= 1.0 - _P_LOW:
        q = p - 0.5
        r = q * q
        x = (
            (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5])
            * q
            / (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0)
        )
    else:
        q = math.sqrt(-2.0 * math.log(1.0 - p))
        x = -(((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / (
            (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        )
    # One Halley step against the exact CDF via erfc.
    err = 0.5 * math.erfc(-x / math.sqrt(2.0)) - p
    u = err * math.sqrt(2.0 * math.pi) * math.exp(0.5 * x * x)
    return x - u / (1.0 + 0.5 * x * u)


def count_ones(word: str) -> int:
    """Number of 1s in a non-empty binary word."""
    if not word:
        raise ValueError("empty codeword")
    ones = word.count("1")
    if ones + word.count("0") != len(word):
        raise ValueError(f"non-binary character in codeword {word!r}")
    return ones


def expected_ones_rate(codebook, dist):
    """Model ones-rate of the encoder output: sum(p*ones) / sum(p*len).

    Exact (a Fraction) when the distribution is rational.
    """
    if len(codebook.codewords) != len(dist.probs):
        raise ValueError("codebook and distribution sizes differ")
    ones = sum(p * count_ones(c) for p, c in zip(dist.probs, codebook.codewords))
    length = sum(p * len(c) for p, c in zip(dist.probs, codebook.codewords))
    return ones / length


def empirical_ones_rate(bits: str) -> tuple[int, int, float]:
    """(ones, total, rate) for a non-empty bit string."""
    if not bits:
        raise ValueError("empty bit stream")
    ones = bits.count("1")
    if ones + bits.count("0") != len(bits):
        raise ValueError("non-binary character in bit stream")
    return ones, len(bits), ones / len(bits)


def wald_interval(successes: int, trials: int, level: float = 0.95) -> tuple[float, float]:
    """Wald confidence interval for a proportion, clamped to [0, 1]."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= successes <= trials:
        raise ValueError("successes must lie in [0, trials]")
    if not 0.0 < level < 1.0:
        raise ValueError("confidence level must be strictly inside (0, 1)")
    rate = successes / trials
    z = normal_quantile(0.5 * (1.0 + level))
    half_width = z * math.sqrt(rate * (1.0 - rate) / trials)
    return max(0.0, rate - half_width), min(1.0, rate + half_width)


@dataclass(frozen=True)
class OnesReport:
    """Expected vs observed ones-rate of an encoded stream."""

    expected_rate: float
    ones: int
    bits: int
    rate: float
    ci_low: float
    ci_high: float
    level: float

    def __post_init__(self) -> None:
        if not self.ci_low <= self.rate <= self.ci_high:
            raise ValueError("interval must contain the observed rate")

    @property
    def fair_rejected(self) -> bool:
        """True when the interval excludes a fair stream's rate 1/2."""
        return not self.ci_low <= 0.5 <= self.ci_high

    def to_json_dict(self) -> dict:
        return {
            "expected_q": self.expected_rate,
            "ones": self.ones,
            "bits": self.bits,
            "empirical_q": self.rate,
            "ci": [self.ci_low, self.ci_high],
            "level": self.level,
            "fair_rejected": self.fair_rejected,
        }


def ones_report(codebook, dist, bits: str, level: float = 0.95) -> OnesReport:
    """Bundle the model rate and the stream's observed rate with its interval."""
    ones, total, rate = empirical_ones_rate(bits)
    low, high = wald_interval(ones, total, level)
    return OnesReport(
        expected_rate=float(expected_ones_rate(codebook, dist)),
        ones=ones,
        bits=total,
        rate=rate,
        ci_low=low,
        ci_high=high,
        level=level,
    )
