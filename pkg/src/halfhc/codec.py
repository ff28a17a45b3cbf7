"""Build a ones-balanced Huffman code and encode/decode with it.

The balancing step never touches the multiset of bit patterns inside a
length class, only which symbol gets which pattern, so compression is
exactly that of the underlying Huffman code.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import factorial
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .distribution import SymbolDistribution
from .huffman import Codebook, LengthClassPartition, build_huffman, partition_by_length
from .ones import HALF, count_ones, expected_ones_rate
from .selection import (
    EndpointProfile,
    Selection,
    endpoint_profile,
    extreme_arrangements,
    solve,
)


@dataclass(frozen=True)
class CodecArtifact:
    """A Huffman code and its ones-balanced rearrangement."""

    distribution: SymbolDistribution
    base: Codebook
    permuted: Codebook
    profile: EndpointProfile
    selection: Selection
    expected_q_base: Fraction | float
    expected_q_half: Fraction | float

    def codebook(self, codec: str) -> Codebook:
        if codec == "hc":
            return self.base
        if codec == "halfhc":
            return self.permuted
        raise ValueError(f"unknown codec {codec!r}; expected 'hc' or 'halfhc'")

    def to_json_dict(self) -> dict:
        def table(codebook: Codebook) -> list[dict]:
            return [
                {"symbol": s, "probability": float(p), "codeword": w, "length": len(w)}
                for s, p, w in zip(
                    codebook.symbols, self.distribution.probs, codebook.codewords
                )
            ]

        return {
            "base": table(self.base),
            "permuted": table(self.permuted),
            "selection": self.selection.to_json_dict(),
            "expected_q_base": float(self.expected_q_base),
            "expected_q_half": float(self.expected_q_half),
        }

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )


def apply_selection(
    codebook: Codebook, partition: LengthClassPartition, choices: Sequence[int]
) -> Codebook:
    """Rearrange each length class to its chosen extreme arrangement.

    Choice 0 hands the most 1s to the most probable member of the class,
    choice 1 the fewest; patterns never cross class boundaries.
    """
    if len(choices) != len(partition.classes):
        raise ValueError("selection length does not match the class count")
    new_words = list(codebook.codewords)
    for j, cls in enumerate(partition.classes):
        words = partition.member_codewords(codebook, j)
        maximizing, minimizing = extreme_arrangements(words, cls.conditional)
        arrangement = minimizing if choices[j] else maximizing
        for member, source in zip(cls.members, arrangement):
            new_words[member] = words[source]
    return Codebook(codebook.symbols, tuple(new_words))


def half_huffman(
    dist: SymbolDistribution, solver: str = "exhaustive", epsilon: float = 1e-12
) -> CodecArtifact:
    """Huffman code rearranged so its expected ones-rate is nearest 1/2.

    Builds the canonical code, computes each class's extreme expected
    ones-counts, solves the binary selection problem with the chosen
    solver ('exhaustive', 'bisection', or 'branch_bound'), and applies the
    winning arrangements.
    """
    base = build_huffman(dist)
    partition = partition_by_length(base, dist)
    profile = endpoint_profile(partition, base)
    selection = solve(profile.coeffs, profile.offset, method=solver, epsilon=epsilon)
    permuted = apply_selection(base, partition, selection.choices)
    return CodecArtifact(
        distribution=dist,
        base=base,
        permuted=permuted,
        profile=profile,
        selection=selection,
        expected_q_base=expected_ones_rate(base, dist),
        expected_q_half=expected_ones_rate(permuted, dist),
    )


def encode(text: Iterable[str], codebook: Codebook) -> str:
    """Concatenated codewords for a symbol sequence."""
    table = codebook.table
    try:
        return "".join(table[sym] for sym in text)
    except KeyError as exc:
        raise ValueError(f"unknown symbol: {exc.args[0]!r}") from None


def decode(bits: str, codebook: Codebook) -> str:
    """Unique prefix parse of a full codeword stream back to symbols."""
    root = codebook.parse_trie
    out: list[str] = []
    node = root
    for bit in bits:
        try:
            nxt = node[bit]
        except KeyError:
            raise ValueError(f"non-binary character {bit!r} in bit stream") from None
        if isinstance(nxt, str):
            out.append(nxt)
            node = root
        else:
            node = nxt
    if node is not root:
        raise ValueError("truncated stream: bits end inside a codeword")
    return "".join(out)


def _ordering_count(values: Sequence[int]) -> int:
    """Number of distinct orderings of a multiset (multinomial coefficient)."""
    total = factorial(len(values))
    for repeat in Counter(values).values():
        total //= factorial(repeat)
    return total


def _multiset_orderings(values: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Distinct orderings of a multiset, without generating duplicates."""
    counter = Counter(values)
    keys = sorted(counter)
    size = len(values)
    prefix: list[int] = []

    def walk() -> Iterator[tuple[int, ...]]:
        if len(prefix) == size:
            yield tuple(prefix)
            return
        for key in keys:
            if counter[key]:
                counter[key] -= 1
                prefix.append(key)
                yield from walk()
                prefix.pop()
                counter[key] += 1

    yield from walk()


def best_over_all_arrangements(
    dist: SymbolDistribution, limit: int = 1_000_000
) -> Fraction | float:
    """Smallest |ones-rate - 1/2| over every within-class rearrangement.

    Diagnostic only: scans the full cross product of class arrangements
    (distinct ones-count profiles), which the endpoint selection is a
    two-point subset of. Guarded by `limit` on the arrangement count,
    checked before anything is enumerated.
    """
    base = build_huffman(dist)
    partition = partition_by_length(base, dist)
    class_ones: list[tuple] = []
    total = 1
    for j, cls in enumerate(partition.classes):
        ones = [count_ones(w) for w in partition.member_codewords(base, j)]
        total *= _ordering_count(ones)
        if total > limit:
            raise ValueError(f"arrangement count exceeds limit {limit}")
        class_ones.append((cls, ones))
    per_class = [
        sorted(
            {
                sum(q * o for q, o in zip(cls.conditional, perm)) * cls.prob
                for perm in _multiset_orderings(ones)
            }
        )
        for cls, ones in class_ones
    ]
    mean_length = partition.mean_length
    best = None
    for combo in product(*per_class):
        gap = abs(sum(combo) / mean_length - HALF)
        if best is None or gap < best:
            best = gap
    return best
