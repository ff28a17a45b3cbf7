"""Channel-side evaluation: parse encoded bits into channel symbols.

A matcher code is a complete prefix-free binary-to-symbol code. Under a
fair bit stream it induces a generalized dyadic distribution over the
channel symbols; feeding it a real encoder's output shows how far the
effective distribution drifts from that design point. A brute-force
search over fixed-depth dyadic distributions stands in for a dedicated
matcher designer at small alphabet sizes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .codec import half_huffman, encode
from .distribution import SymbolDistribution
from .ones import OnesReport, empirical_ones_rate, ones_report, wald_interval

_PMF_TOL = 5e-3  # rounded-for-display target pmfs are accepted


@dataclass(frozen=True)
class ChannelSpec:
    """Channel symbols with per-symbol costs, a cost budget, and a target pmf."""

    symbols: tuple[str, ...]
    costs: tuple[float, ...]
    budget: float
    target: tuple[float, ...]

    def __post_init__(self) -> None:
        n = len(self.symbols)
        if n < 2:
            raise ValueError("channel needs at least two symbols")
        if len(self.costs) != n or len(self.target) != n:
            raise ValueError("symbols, costs and target must align")
        if len(set(self.symbols)) != n:
            raise ValueError("duplicate channel symbol")
        if any(c < 0 for c in self.costs):
            raise ValueError("costs must be non-negative")
        if any(not p > 0 for p in self.target):
            raise ValueError("target pmf entries must be positive")
        if abs(sum(self.target) - 1.0) > _PMF_TOL:
            raise ValueError(f"target pmf sums to {sum(self.target)}, expected about 1")
        if not self.budget >= min(self.costs):
            raise ValueError("budget below the cheapest symbol cost: no pmf is feasible")

    @classmethod
    def from_json_dict(cls, raw: dict) -> "ChannelSpec":
        try:
            return cls(
                symbols=tuple(str(s) for s in raw["symbols"]),
                costs=tuple(float(c) for c in raw["w"]),
                budget=float(raw["S"]),
                target=tuple(float(p) for p in raw["p_star"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"bad channel spec: {exc}") from exc

    @classmethod
    def load(cls, path: str | Path) -> "ChannelSpec":
        with open(path, encoding="utf-8") as handle:
            return cls.from_json_dict(json.load(handle))

    def to_json_dict(self) -> dict:
        return {
            "symbols": list(self.symbols),
            "w": list(self.costs),
            "S": self.budget,
            "p_star": list(self.target),
        }


@dataclass(frozen=True)
class MatcherCode:
    """Complete prefix-free code from binary words to channel symbols.

    A symbol may own several codewords; its induced probability under fair
    bits is the sum of 2**-length over them.
    """

    entries: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        if not self.entries:
            raise ValueError("matcher has no entries")
        words = [w for w, _ in self.entries]
        for word in words:
            if not word or word.count("0") + word.count("1") != len(word):
                raise ValueError(f"bad matcher codeword {word!r}")
        if len(set(words)) != len(words):
            raise ValueError("duplicate matcher codeword")
        ordered = sorted(words)
        for a, b in zip(ordered, ordered[1:]):
            if b.startswith(a):
                raise ValueError(f"not prefix-free: {a!r} prefixes {b!r}")
        if sum(Fraction(1, 2 ** len(w)) for w in words) != 1:
            raise ValueError("Kraft sum must equal 1 (complete matcher)")

    @property
    def symbols(self) -> tuple[str, ...]:
        """Distinct output symbols in first-appearance order."""
        seen: dict[str, None] = {}
        for _, sym in self.entries:
            seen.setdefault(sym)
        return tuple(seen)

    @property
    def max_length(self) -> int:
        return max(len(w) for w, _ in self.entries)

    def dyadic_pmf(self, order: Sequence[str] | None = None) -> tuple[Fraction, ...]:
        """Exact symbol distribution induced by parsing fair bits."""
        masses: dict[str, Fraction] = {}
        for word, sym in self.entries:
            masses[sym] = masses.get(sym, Fraction(0)) + Fraction(1, 2 ** len(word))
        symbols = self.symbols if order is None else tuple(order)
        missing = set(masses) - set(symbols)
        if missing:
            raise ValueError(f"matcher emits symbols outside the requested order: {missing}")
        return tuple(masses.get(s, Fraction(0)) for s in symbols)

    @classmethod
    def load(cls, path: str | Path) -> "MatcherCode":
        with open(path, encoding="utf-8") as handle:
            raw = json.load(handle)
        if not isinstance(raw, list):
            raise ValueError("matcher JSON must be a list of {codeword, symbol} objects")
        try:
            entries = tuple((str(e["codeword"]), str(e["symbol"])) for e in raw)
        except (KeyError, TypeError) as exc:
            raise ValueError(f"bad matcher entry: {exc}") from exc
        return cls(entries)

    def save(self, path: str | Path) -> None:
        payload = [{"codeword": w, "symbol": s} for w, s in self.entries]
        Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


@dataclass(frozen=True)
class ParseResult:
    """Outcome of parsing a bit stream with a matcher."""

    symbols: tuple[str, ...]
    counts: dict[str, int]
    discarded_bits: int

    @property
    def parsed(self) -> int:
        return len(self.symbols)

    def pmf(self, order: Sequence[str]) -> tuple[float, ...]:
        total = self.parsed
        return tuple(self.counts.get(s, 0) / total for s in order)


def parse_stream(bits: str, matcher: MatcherCode) -> ParseResult:
    """Greedy unique prefix parse; unparseable tail bits are counted, not kept."""
    trie: dict = {}
    for word, sym in matcher.entries:
        node = trie
        for bit in word[:-1]:
            node = node.setdefault(bit, {})
        node[word[-1]] = sym
    out: list[str] = []
    counts: dict[str, int] = {}
    node = trie
    consumed = 0
    pending = 0
    for bit in bits:
        try:
            nxt = node[bit]
        except KeyError:
            raise ValueError(f"non-binary character {bit!r} in bit stream") from None
        pending += 1
        if isinstance(nxt, str):
            out.append(nxt)
            counts[nxt] = counts.get(nxt, 0) + 1
            consumed += pending
            pending = 0
            node = trie
        else:
            node = nxt
    if not out:
        raise ValueError("stream too short: no matcher codeword completed")
    return ParseResult(symbols=tuple(out), counts=counts, discarded_bits=len(bits) - consumed)


def kl_divergence(p: Sequence[float], q: Sequence[float]) -> float:
    """Kullback-Leibler distance sum(p * ln(p/q)) in nats, with 0 ln 0 = 0."""
    if len(p) != len(q):
        raise ValueError("distributions must have the same length")
    total = 0.0
    for pi, qi in zip(p, q):
        if pi > 0:
            if not qi > 0:
                raise ValueError("support violation: p is positive where q is zero")
            total += pi * math.log(pi / qi)
    return total


def average_cost(costs: Sequence[float], pmf: Sequence[float]) -> float:
    """Mean per-symbol cost under a distribution."""
    if len(costs) != len(pmf):
        raise ValueError("costs and pmf must have the same length")
    return sum(c * p for c, p in zip(costs, pmf))


@dataclass(frozen=True)
class DyadicFit:
    """Best fixed-depth dyadic approximation of a channel target."""

    counts: tuple[int, ...]
    depth: int
    masses: tuple[Fraction, ...]
    kl: float
    cost: float


MAX_SEARCH_SYMBOLS = 4
MAX_SEARCH_DEPTH = 12


def dyadic_search(channel: ChannelSpec, depth: int = 8) -> DyadicFit:
    """Exhaustive KL-minimizing dyadic pmf k/2**depth under the cost budget.

    Scans every composition of 2**depth into positive integer parts (one
    per channel symbol), keeps those whose average cost meets the budget,
    and minimizes KL against the target; ties break by lower cost then
    lexicographic counts. Alphabet and depth guards keep the scan at desk
    scale.
    """
    n = len(channel.symbols)
    if n > MAX_SEARCH_SYMBOLS:
        raise ValueError(f"brute-force search supports at most {MAX_SEARCH_SYMBOLS} symbols")
    if not 1 <= depth <= MAX_SEARCH_DEPTH:
        raise ValueError(f"depth must lie in [1, {MAX_SEARCH_DEPTH}]")
    grain = 1 << depth
    if grain < n:
        raise ValueError("depth too small: fewer grains than symbols")
    scale = 1.0 / grain
    costs = channel.costs
    target = channel.target
    best: tuple[float, float, tuple[int, ...]] | None = None

    def scan(index: int, remaining: int, prefix: list[int]) -> None:
        nonlocal best
        if index == n - 1:
            prefix.append(remaining)
            counts = tuple(prefix)
            prefix.pop()
            cost = sum(c * k for c, k in zip(costs, counts)) * scale
            if cost <= channel.budget:
                kl = sum(
                    (k * scale) * math.log((k * scale) / t) for k, t in zip(counts, target)
                )
                candidate = (kl, cost, counts)
                if best is None or candidate < best:
                    best = candidate
            return
        for k in range(1, remaining - (n - 1 - index) + 1):
            prefix.append(k)
            scan(index + 1, remaining - k, prefix)
            prefix.pop()

    scan(0, grain, [])
    if best is None:
        raise ValueError(
            f"no dyadic pmf at depth {depth} satisfies the cost budget; try a larger depth"
        )
    kl, cost, counts = best
    masses = tuple(Fraction(k, grain) for k in counts)
    return DyadicFit(counts=counts, depth=depth, masses=masses, kl=kl, cost=cost)


def realize_matcher(fit: DyadicFit, symbols: Sequence[str]) -> MatcherCode:
    """Complete prefix code whose fair-bit parse realizes the fitted pmf exactly.

    Each symbol's count splits into powers of two; every power becomes one
    codeword of the matching length, assigned canonically in (length,
    symbol) order.
    """
    if len(symbols) != len(fit.counts):
        raise ValueError("symbols and fitted counts must align")
    leaves: list[tuple[int, int]] = []  # (length, symbol index)
    for i, k in enumerate(fit.counts):
        for exponent in range(k.bit_length() - 1, -1, -1):
            if k >> exponent & 1:
                leaves.append((fit.depth - exponent, i))
    leaves.sort()
    entries = []
    code = 0
    prev_len = leaves[0][0]
    for length, sym_index in leaves:
        code <<= length - prev_len
        entries.append((format(code, f"0{length}b"), symbols[sym_index]))
        code += 1
        prev_len = length
    return MatcherCode(tuple(entries))


@dataclass(frozen=True)
class StreamReport:
    """Channel-side measurements for one bit stream pushed through a matcher."""

    ones: OnesReport
    d_eff: tuple[float, ...]
    kl: float
    cost: float
    parsed: int
    discarded_bits: int

    def to_json_dict(self) -> dict:
        out = self.ones.to_json_dict()
        out.update(
            {
                "d_eff": list(self.d_eff),
                "kl": self.kl,
                "cost": self.cost,
                "parsed_symbols": self.parsed,
                "discarded_bits": self.discarded_bits,
            }
        )
        return out


@dataclass(frozen=True)
class PipelineReport:
    """One codec's end-to-end run plus the matcher's fair-bit baseline."""

    codec: str
    stream: StreamReport
    baseline_pmf: tuple[float, ...]
    baseline_kl: float
    baseline_cost: float
    selection_x: tuple[int, ...] | None = None
    selection_objective: float | None = None

    def to_json_dict(self) -> dict:
        out: dict = {"codec": self.codec, "stream": self.stream.to_json_dict()}
        out["baseline"] = {
            "d": list(self.baseline_pmf),
            "kl": self.baseline_kl,
            "cost": self.baseline_cost,
        }
        if self.selection_x is not None:
            out["selection"] = {
                "x": list(self.selection_x),
                "objective": self.selection_objective,
            }
        return out


def evaluate_stream(
    bits: str,
    matcher: MatcherCode,
    channel: ChannelSpec,
    codebook=None,
    dist: SymbolDistribution | None = None,
    expected_rate: float = 0.5,
    level: float = 0.95,
) -> StreamReport:
    """Measure a bit stream: ones statistics, effective pmf, KL and cost."""
    unknown = set(matcher.symbols) - set(channel.symbols)
    if unknown:
        raise ValueError(f"matcher emits symbols missing from the channel: {unknown}")
    if codebook is not None and dist is not None:
        ones = ones_report(codebook, dist, bits, level=level)
    else:
        count, total, rate = empirical_ones_rate(bits)
        low, high = wald_interval(count, total, level)
        ones = OnesReport(
            expected_rate=expected_rate,
            ones=count,
            bits=total,
            rate=rate,
            ci_low=low,
            ci_high=high,
            level=level,
        )
    parsed = parse_stream(bits, matcher)
    d_eff = parsed.pmf(channel.symbols)
    return StreamReport(
        ones=ones,
        d_eff=d_eff,
        kl=kl_divergence(d_eff, channel.target),
        cost=average_cost(channel.costs, d_eff),
        parsed=parsed.parsed,
        discarded_bits=parsed.discarded_bits,
    )


def run_pipeline(
    corpus: str,
    codec: str,
    matcher: MatcherCode,
    channel: ChannelSpec,
    solver: str = "exhaustive",
    epsilon: float = 1e-12,
    level: float = 0.95,
) -> PipelineReport:
    """Compress a corpus, parse the bits with the matcher, and score the result.

    The report pairs the observed stream (ones statistics with a Wald
    interval, effective pmf, KL distance to the target, average cost)
    with the matcher's exact fair-bit baseline.
    """
    dist = SymbolDistribution.from_corpus(corpus)
    artifact = half_huffman(dist, solver=solver, epsilon=epsilon)
    codebook = artifact.codebook(codec)
    bits = encode(corpus, codebook)
    stream = evaluate_stream(bits, matcher, channel, codebook=codebook, dist=dist, level=level)
    baseline = tuple(float(m) for m in matcher.dyadic_pmf(channel.symbols))
    balanced = codec == "halfhc"
    return PipelineReport(
        codec=codec,
        stream=stream,
        baseline_pmf=baseline,
        baseline_kl=kl_divergence(baseline, channel.target),
        baseline_cost=average_cost(channel.costs, baseline),
        selection_x=artifact.selection.choices if balanced else None,
        selection_objective=float(artifact.selection.objective) if balanced else None,
    )
