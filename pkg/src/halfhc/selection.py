"""Extreme within-class arrangements and solvers for the balance selection.

Each length class can put its bit patterns in a ones-maximizing or a
ones-minimizing order. Choosing per class turns "make the ones-rate close
to 1/2" into minimizing |coeffs . x + offset| over binary x, which all
three solvers here do exactly; they agree bit-for-bit, including the
lexicographically-smallest tie rule.

Arithmetic is duck-typed: exact with Fractions, plain with floats.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .huffman import Codebook, LengthClassPartition
from .ones import HALF, count_ones

# Absorbs float rounding in feasibility verdicts without changing them at
# the scale of real instances.
FEASIBILITY_TOL = 1e-15

EXHAUSTIVE_LIMIT = 30


def extreme_arrangements(
    codewords: Sequence[str], conditional: Sequence
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Ones-maximizing and ones-minimizing assignments for one length class.

    Members are ordered by non-increasing conditional probability. Entry t
    of each returned permutation is the index (into `codewords`) of the
    pattern handed to member t: the maximizing arrangement gives the most
    1s to the most probable member, the minimizing one the fewest. Ties on
    ones-count go to the lexicographically smaller codeword.
    """
    if len(codewords) != len(conditional):
        raise ValueError("codewords and conditional probabilities must align")
    for a, b in zip(conditional, conditional[1:]):
        if a < b:
            raise ValueError("conditional probabilities must be sorted non-increasing")
    indices = range(len(codewords))
    maximizing = tuple(sorted(indices, key=lambda k: (-count_ones(codewords[k]), codewords[k])))
    minimizing = tuple(sorted(indices, key=lambda k: (count_ones(codewords[k]), codewords[k])))
    return maximizing, minimizing


@dataclass(frozen=True)
class EndpointProfile:
    """Per-class extreme ones-counts and the induced linear objective.

    `coeffs[j] = class_prob[j] * (ones_min[j] - ones_max[j]) / mean_length`
    is never positive, and `offset = sum(class_prob * ones_max) /
    mean_length - 1/2`, so a selection x (0 picks the maximizing
    arrangement, 1 the minimizing one) yields ones-rate
    `coeffs . x + offset + 1/2`.
    """

    class_probs: tuple
    ones_max: tuple
    ones_min: tuple
    mean_length: Fraction | float
    coeffs: tuple
    offset: Fraction | float

    @property
    def size(self) -> int:
        return len(self.coeffs)

    def ones_rate(self, choices: Sequence[int]):
        """Model ones-rate of the code under a selection vector."""
        if len(choices) != self.size:
            raise ValueError("selection length mismatch")
        total = self.offset
        for coeff, x in zip(self.coeffs, choices):
            if x:
                total = total + coeff
        return total + HALF


def endpoint_profile(partition: LengthClassPartition, codebook: Codebook) -> EndpointProfile:
    """Extreme expected ones-counts per class plus the objective's coefficients."""
    probs = []
    ones_max = []
    ones_min = []
    for j, cls in enumerate(partition.classes):
        words = partition.member_codewords(codebook, j)
        maximizing, minimizing = extreme_arrangements(words, cls.conditional)
        ones_max.append(sum(q * count_ones(words[k]) for q, k in zip(cls.conditional, maximizing)))
        ones_min.append(sum(q * count_ones(words[k]) for q, k in zip(cls.conditional, minimizing)))
        probs.append(cls.prob)
    mean_length = partition.mean_length
    coeffs = tuple(r * (lo - hi) / mean_length for r, lo, hi in zip(probs, ones_min, ones_max))
    offset = sum(r * hi for r, hi in zip(probs, ones_max)) / mean_length - HALF
    return EndpointProfile(
        class_probs=tuple(probs),
        ones_max=tuple(ones_max),
        ones_min=tuple(ones_min),
        mean_length=mean_length,
        coeffs=coeffs,
        offset=offset,
    )


@dataclass(frozen=True)
class Selection:
    """A binary per-class choice (0 = ones-maximizing, 1 = ones-minimizing)."""

    choices: tuple[int, ...]
    objective: Fraction | float
    evaluations: int | None = None
    iterations: int | None = None
    nodes: int | None = None

    def to_json_dict(self) -> dict:
        out: dict = {"x": list(self.choices), "objective": float(self.objective)}
        for key in ("evaluations", "iterations", "nodes"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        return out


def _objective(coeffs: Sequence, offset, choices: Sequence[int]):
    """|coeffs . x + offset| summed in ascending class order (all solvers share it)."""
    total = offset
    for coeff, x in zip(coeffs, choices):
        if x:
            total = total + coeff
    return abs(total)


def _check_instance(coeffs: Sequence, offset) -> None:
    if len(coeffs) == 0:
        raise ValueError("instance has no classes")


def solve_exhaustive(coeffs: Sequence, offset) -> Selection:
    """Scan all 2**m selections; minimum objective, lexicographically-smallest ties.

    The scan walks a Gray code so each step is one coefficient update;
    near-best candidates are re-scored freshly to keep float drift out of
    the comparison.
    """
    _check_instance(coeffs, offset)
    m = len(coeffs)
    if m > EXHAUSTIVE_LIMIT:
        raise ValueError(
            f"{m} classes exceed the exhaustive limit of {EXHAUSTIVE_LIMIT}; "
            "use the bisection or branch-and-bound solver"
        )
    best_choices = (0,) * m
    best_obj = abs(offset)
    state = [0] * m
    running = offset
    guard = 1e-9
    for step in range(1, 1 << m):
        flip = (step & -step).bit_length() - 1
        if state[flip]:
            state[flip] = 0
            running = running - coeffs[flip]
        else:
            state[flip] = 1
            running = running + coeffs[flip]
        if abs(running) <= best_obj + guard:
            candidate = tuple(state)
            obj = _objective(coeffs, offset, candidate)
            if (obj, candidate) < (best_obj, best_choices):
                best_obj, best_choices = obj, candidate
    return Selection(best_choices, best_obj, evaluations=1 << m)


def feasibility_search(coeffs: Sequence, offset, threshold) -> tuple[int, ...] | None:
    """First (lexicographically smallest) x with |coeffs . x + offset| <= threshold.

    Depth-first over the classes with interval pruning: a partial
    assignment can still reach any value in [fixed + negative remainder,
    fixed + positive remainder]; subtrees whose interval misses
    [-threshold, threshold] (padded by FEASIBILITY_TOL) are cut. Returns
    None when the problem is infeasible at this threshold.
    """
    _check_instance(coeffs, offset)
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    m = len(coeffs)
    neg_tail = [0] * (m + 1)
    pos_tail = [0] * (m + 1)
    for j in range(m - 1, -1, -1):
        coeff = coeffs[j]
        neg_tail[j] = neg_tail[j + 1] + (coeff if coeff < 0 else 0)
        pos_tail[j] = pos_tail[j + 1] + (coeff if coeff > 0 else 0)
    choices = [0] * m

    def walk(j: int, fixed) -> bool:
        if fixed + neg_tail[j] - threshold > FEASIBILITY_TOL:
            return False
        if -threshold - (fixed + pos_tail[j]) > FEASIBILITY_TOL:
            return False
        if j == m:
            return True
        choices[j] = 0
        if walk(j + 1, fixed):
            return True
        choices[j] = 1
        return walk(j + 1, fixed + coeffs[j])

    return tuple(choices) if walk(0, offset) else None


def solve_bisection(
    coeffs: Sequence,
    offset,
    epsilon: float = 1e-12,
    lower=0,
    upper=None,
) -> Selection:
    """Bisect on the objective value, keeping the last feasibility witness.

    The bracket starts at [0, |offset|] by default (the all-zeros selection
    achieves |offset|); each round solves the feasibility problem at the
    midpoint and halves the bracket, stopping once it is narrower than
    epsilon. The witness then sits within epsilon of the true optimum, and
    on instances whose objective values are separated by more than epsilon
    it is the exact optimum with the same tie rule as the other solvers.
    """
    _check_instance(coeffs, offset)
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if lower < 0:
        raise ValueError("lower bound must be non-negative")
    m = len(coeffs)
    if upper is None:
        upper = abs(offset)
        witness: tuple[int, ...] = (0,) * m
    else:
        witness_or_none = feasibility_search(coeffs, offset, upper)
        if witness_or_none is None:
            raise ValueError("initial upper bound is not an achievable objective")
        witness = witness_or_none
    if upper < lower:
        raise ValueError("upper bound below lower bound")
    iterations = 0
    while upper - lower > epsilon:
        midpoint = (lower + upper) / 2
        found = feasibility_search(coeffs, offset, midpoint)
        if found is None:
            lower = midpoint
        else:
            upper = midpoint
            witness = found
        iterations += 1
    return Selection(witness, _objective(coeffs, offset, witness), iterations=iterations)


def solve_branch_bound(coeffs: Sequence, offset) -> Selection:
    """Best-first branch and bound; exact optimum with the shared tie rule.

    A node is a prefix of the selection vector; its bound is the distance
    from zero to the interval of values its completions can reach (zero if
    the interval straddles zero). Nodes pop in (bound, prefix) order, so
    the first complete node popped is the optimum with the
    lexicographically-smallest tie break.
    """
    _check_instance(coeffs, offset)
    m = len(coeffs)
    neg_tail = [0] * (m + 1)
    pos_tail = [0] * (m + 1)
    for j in range(m - 1, -1, -1):
        coeff = coeffs[j]
        neg_tail[j] = neg_tail[j + 1] + (coeff if coeff < 0 else 0)
        pos_tail[j] = pos_tail[j + 1] + (coeff if coeff > 0 else 0)

    def bound(j: int, fixed):
        low = fixed + neg_tail[j]
        high = fixed + pos_tail[j]
        if low <= 0 <= high:
            return 0
        return min(abs(low), abs(high))

    incumbent_obj = abs(offset)  # achievable at the all-zeros selection
    heap: list[tuple] = [(bound(0, offset), (), offset)]
    pops = 0
    while heap:
        node_bound, prefix, fixed = heapq.heappop(heap)
        pops += 1
        if node_bound > incumbent_obj:
            continue
        depth = len(prefix)
        if depth == m:
            return Selection(prefix, _objective(coeffs, offset, prefix), nodes=pops)
        for bit in (0, 1):
            child_fixed = fixed + coeffs[depth] if bit else fixed
            child_bound = bound(depth + 1, child_fixed)
            if child_bound > incumbent_obj:
                continue
            if depth + 1 == m and child_bound < incumbent_obj:
                incumbent_obj = child_bound
            heapq.heappush(heap, (child_bound, prefix + (bit,), child_fixed))
    raise RuntimeError("search exhausted without a complete selection")


SOLVERS = {
    "exhaustive": solve_exhaustive,
    "bisection": solve_bisection,
    "branch_bound": solve_branch_bound,
    "bb": solve_branch_bound,
}


def solve(coeffs: Sequence, offset, method: str = "exhaustive", epsilon: float = 1e-12) -> Selection:
    """Dispatch to a solver by name ('exhaustive', 'bisection', 'branch_bound'/'bb')."""
    try:
        solver = SOLVERS[method]
    except KeyError:
        raise ValueError(f"unknown solver {method!r}; pick one of {sorted(SOLVERS)}") from None
    if solver is solve_bisection:
        return solver(coeffs, offset, epsilon=epsilon)
    return solver(coeffs, offset)


def load_instance(path: str | Path) -> tuple[list[float], float, float]:
    """Read a solver instance JSON: fields `a` (array), `b` (number), optional `epsilon`."""
    with open(path, encoding="utf-8") as handle:
        raw = json.load(handle)
    if not isinstance(raw, dict) or "a" not in raw or "b" not in raw:
        raise ValueError("instance JSON must be an object with fields 'a' and 'b'")
    coeffs = raw["a"]
    if not isinstance(coeffs, list) or not coeffs:
        raise ValueError("'a' must be a non-empty array of numbers")
    try:
        coeffs = [float(c) for c in coeffs]
        offset = float(raw["b"])
        epsilon = float(raw.get("epsilon", 1e-12))
    except (TypeError, ValueError) as exc:
        raise ValueError(f"non-numeric instance field: {exc}") from exc
    return coeffs, offset, epsilon


def dump_instance(path: str | Path, coeffs: Sequence, offset, epsilon: float = 1e-12) -> None:
    payload = {"a": [float(c) for c in coeffs], "b": float(offset), "epsilon": epsilon}
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
