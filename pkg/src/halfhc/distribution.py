"""Symbol distributions built from text corpora or explicit weight tables.

Probabilities are kept as exact rationals whenever the input allows it
(character counts, integer or decimal weights), which makes downstream
Kraft and expected-length checks exact.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

Prob = Fraction | float

_SUM_TOL = 1e-12


def _exact(weight: int | float | str | Fraction) -> Fraction:
    """Exact rational view of a weight. Floats convert by their binary value."""
    if isinstance(weight, bool):
        raise ValueError("degenerate probability: boolean weight")
    return Fraction(weight)


@dataclass(frozen=True)
class SymbolDistribution:
    """Alphabet of at least two symbols with probabilities sorted non-increasing."""

    symbols: tuple[str, ...]
    probs: tuple[Prob, ...]

    def __post_init__(self) -> None:
        if len(self.symbols) != len(self.probs):
            raise ValueError("symbols and probs must have the same length")
        if len(self.symbols) < 2:
            raise ValueError("alphabet size < 2")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("duplicate symbol in alphabet")
        for p in self.probs:
            if not p > 0:
                raise ValueError("degenerate probability: all probabilities must be > 0")
        for a, b in zip(self.probs, self.probs[1:]):
            if a < b:
                raise ValueError("probabilities must be sorted non-increasing")
        total = sum(self.probs)
        if isinstance(total, Fraction):
            if total != 1:
                raise ValueError(f"probabilities sum to {total}, expected exactly 1")
        elif abs(total - 1.0) > _SUM_TOL:
            raise ValueError(f"probabilities sum to {total}, expected 1 within {_SUM_TOL}")

    @property
    def n(self) -> int:
        return len(self.symbols)

    def float_probs(self) -> tuple[float, ...]:
        return tuple(float(p) for p in self.probs)

    @classmethod
    def from_corpus(cls, text: str) -> "SymbolDistribution":
        """Empirical per-character distribution of a text.

        Each character (whitespace included) is a symbol; probabilities are
        exact relative frequencies. Frequency ties are ordered by ascending
        codepoint.
        """
        if not text:
            raise ValueError("empty corpus")
        counts = Counter(text)
        if len(counts) < 2:
            raise ValueError("alphabet size < 2")
        total = len(text)
        items = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        return cls(
            symbols=tuple(sym for sym, _ in items),
            probs=tuple(Fraction(cnt, total) for _, cnt in items),
        )

    @classmethod
    def from_weights(
        cls, pairs: Iterable[tuple[str, int | float | str | Fraction]]
    ) -> "SymbolDistribution":
        """Validated distribution from (symbol, weight) pairs.

        Weights are normalized exactly; zero or negative weights are
        rejected. Equal weights keep their input order.
        """
        pairs = list(pairs)
        symbols = [sym for sym, _ in pairs]
        if len(set(symbols)) != len(symbols):
            raise ValueError("duplicate symbol in weight table")
        weights = []
        for sym, raw in pairs:
            w = _exact(raw)
            if w <= 0:
                raise ValueError(f"degenerate probability: weight {raw!r} for symbol {sym!r}")
            weights.append(w)
        if len(weights) < 2:
            raise ValueError("alphabet size < 2")
        total = sum(weights)
        order = sorted(range(len(pairs)), key=lambda i: -weights[i])
        return cls(
            symbols=tuple(symbols[i] for i in order),
            probs=tuple(weights[i] / total for i in order),
        )

    @classmethod
    def from_csv(cls, path: str | Path) -> "SymbolDistribution":
        """Load a `symbol,weight` CSV. Weights parse exactly (ints or decimals)."""
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            header = next(reader, None)
            if header != ["symbol", "weight"]:
                raise ValueError(f"expected header 'symbol,weight', got {header!r}")
            pairs: list[tuple[str, Fraction]] = []
            for row in reader:
                if not row:
                    continue
                if len(row) != 2:
                    raise ValueError(f"malformed row {row!r}")
                try:
                    weight = Fraction(row[1])
                except (ValueError, ZeroDivisionError) as exc:
                    raise ValueError(f"bad weight {row[1]!r} for symbol {row[0]!r}") from exc
                pairs.append((row[0], weight))
        return cls.from_weights(pairs)


def estimate_distribution(text: str) -> SymbolDistribution:
    """Alias for :meth:`SymbolDistribution.from_corpus`."""
    return SymbolDistribution.from_corpus(text)
