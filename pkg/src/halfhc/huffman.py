"""Optimal prefix-code construction and length-class bookkeeping.

The construction is deterministic: merge ties prefer the earliest-created
nodes (leaves in symbol order, then merged nodes in creation order), and
bit patterns are assigned canonically, so two runs on the same
distribution produce the same codebook.
"""

from __future__ import annotations

import csv
import heapq
import io
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path

from .distribution import Prob, SymbolDistribution
from .ones import count_ones


@dataclass(frozen=True)
class Codebook:
    """Prefix-free complete code, one codeword per symbol.

    Codewords align with the symbol order of the distribution the code
    was built for (non-increasing probability).
    """

    symbols: tuple[str, ...]
    codewords: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.symbols) != len(self.codewords):
            raise ValueError("symbols and codewords must have the same length")
        if len(self.codewords) < 2:
            raise ValueError("a codebook needs at least two codewords")
        for word in self.codewords:
            count_ones(word)  # validates non-empty binary
        ordered = sorted(self.codewords)
        for a, b in zip(ordered, ordered[1:]):
            if b.startswith(a):
                raise ValueError(f"not prefix-free: {a!r} prefixes {b!r}")
        if sum(Fraction(1, 2 ** len(w)) for w in self.codewords) != 1:
            raise ValueError("Kraft sum must equal 1 (complete code)")

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(w) for w in self.codewords)

    @cached_property
    def table(self) -> dict[str, str]:
        """Symbol to codeword mapping."""
        return dict(zip(self.symbols, self.codewords))

    @cached_property
    def parse_trie(self) -> dict:
        """Bit-walk trie; leaves hold symbols. Complete codes make every walk total."""
        root: dict = {}
        for sym, word in zip(self.symbols, self.codewords):
            node = root
            for bit in word[:-1]:
                node = node.setdefault(bit, {})
            node[word[-1]] = sym
        return root


def huffman_lengths(probs: tuple[Prob, ...]) -> tuple[int, ...]:
    """Optimal codeword lengths by the classic two-smallest merge.

    Weight ties merge the two earliest-created nodes: leaves count as
    created in symbol order, merged nodes in creation order.
    """
    n = len(probs)
    if n < 2:
        raise ValueError("alphabet size < 2")
    heap: list[tuple[Prob, int]] = [(p, i) for i, p in enumerate(probs)]
    heapq.heapify(heap)
    parent: dict[int, int] = {}
    next_id = n
    while len(heap) > 1:
        w1, id1 = heapq.heappop(heap)
        w2, id2 = heapq.heappop(heap)
        parent[id1] = next_id
        parent[id2] = next_id
        heapq.heappush(heap, (w1 + w2, next_id))
        next_id += 1
    lengths = []
    for leaf in range(n):
        depth = 0
        node = leaf
        while node in parent:
            node = parent[node]
            depth += 1
        lengths.append(depth)
    return tuple(lengths)


def canonical_codewords(lengths: tuple[int, ...]) -> tuple[str, ...]:
    """Canonical bit patterns for a Kraft-complete length profile.

    Symbols are ranked by (length, index); each gets the next binary value,
    left-shifted when the length grows. Within a length class the patterns
    are therefore consecutive, assigned in index (probability) order.
    """
    order = sorted(range(len(lengths)), key=lambda i: (lengths[i], i))
    words: list[str] = [""] * len(lengths)
    code = 0
    prev_len = lengths[order[0]]
    for idx in order:
        code <<= lengths[idx] - prev_len
        words[idx] = format(code, f"0{lengths[idx]}b")
        code += 1
        prev_len = lengths[idx]
    return tuple(words)


def build_huffman(dist: SymbolDistribution) -> Codebook:
    """Minimum expected-length prefix code with canonical bit patterns."""
    return Codebook(dist.symbols, canonical_codewords(huffman_lengths(dist.probs)))


def expected_length(codebook: Codebook, dist: SymbolDistribution):
    """Mean codeword length sum(p * len), exact for rational distributions."""
    if len(codebook.codewords) != len(dist.probs):
        raise ValueError("codebook and distribution sizes differ")
    return sum(p * len(w) for p, w in zip(dist.probs, codebook.codewords))


@dataclass(frozen=True)
class LengthClass:
    """All codewords of one distinct length.

    Member indices are in symbol order (non-increasing probability);
    `conditional` holds each member's probability given this class and
    `expected_ones` the class-conditional mean ones-count of the current
    arrangement.
    """

    length: int
    members: tuple[int, ...]
    prob: Prob
    conditional: tuple[Prob, ...]
    expected_ones: Prob


@dataclass(frozen=True)
class LengthClassPartition:
    """Length classes in strictly ascending length order."""

    classes: tuple[LengthClass, ...]

    @property
    def mean_length(self):
        return sum(c.prob * c.length for c in self.classes)

    def member_codewords(self, codebook: Codebook, index: int) -> tuple[str, ...]:
        return tuple(codebook.codewords[i] for i in self.classes[index].members)


def partition_by_length(codebook: Codebook, dist: SymbolDistribution) -> LengthClassPartition:
    """Group codewords by distinct length with class and conditional probabilities."""
    if len(codebook.codewords) != len(dist.probs):
        raise ValueError("codebook and distribution sizes differ")
    by_length: dict[int, list[int]] = {}
    for i, word in enumerate(codebook.codewords):
        by_length.setdefault(len(word), []).append(i)
    classes = []
    for length in sorted(by_length):
        members = tuple(by_length[length])
        prob = sum(dist.probs[i] for i in members)
        conditional = tuple(dist.probs[i] / prob for i in members)
        ones = sum(
            q * count_ones(codebook.codewords[i]) for q, i in zip(conditional, members)
        )
        classes.append(
            LengthClass(
                length=length,
                members=members,
                prob=prob,
                conditional=conditional,
                expected_ones=ones,
            )
        )
    return LengthClassPartition(tuple(classes))


def codebook_to_csv(codebook: Codebook, dist: SymbolDistribution) -> str:
    """CSV table `symbol,probability,codeword,length`, one row per symbol."""
    if codebook.symbols != dist.symbols:
        raise ValueError("codebook and distribution symbols differ")
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["symbol", "probability", "codeword", "length"])
    for sym, p, word in zip(codebook.symbols, dist.probs, codebook.codewords):
        writer.writerow([sym, repr(float(p)), word, len(word)])
    return buffer.getvalue()


def write_codebook_csv(path: str | Path, codebook: Codebook, dist: SymbolDistribution) -> None:
    Path(path).write_text(codebook_to_csv(codebook, dist), encoding="utf-8")
