import math
from fractions import Fraction
from itertools import product

import pytest

from halfhc.codec import apply_selection
from halfhc.distribution import SymbolDistribution
from halfhc.huffman import build_huffman, partition_by_length
from halfhc.ones import expected_ones_rate
from halfhc.rng import SplitMix64
from halfhc.selection import (
    dump_instance,
    endpoint_profile,
    extreme_arrangements,
    feasibility_search,
    load_instance,
    solve,
    solve_bisection,
    solve_branch_bound,
    solve_exhaustive,
)

from helpers import random_distribution, random_instance


def brute_force_best(coeffs, offset):
    """Independent enumeration oracle: min (|value|, x) over the full cube."""
    return min(
        (abs(sum(c for c, x in zip(coeffs, xs) if x) + offset), xs)
        for xs in product((0, 1), repeat=len(coeffs))
    )


# ---------------------------------------------------------------- arrangements


def test_extreme_arrangements_two_member_class():
    maximizing, minimizing = extreme_arrangements(("000", "110"), (0.638, 0.362))
    assert maximizing == (1, 0)  # most 1s to the most probable member
    assert minimizing == (0, 1)  # identity


def test_extreme_arrangements_single_member():
    assert extreme_arrangements(("10",), (1.0,)) == ((0,), (0,))


def test_extreme_arrangements_against_permutation_oracle():
    from itertools import permutations

    words = ("0000", "0110", "1010", "1110")  # ones counts 0, 2, 2, 3
    probs = (0.4, 0.3, 0.2, 0.1)
    maximizing, minimizing = extreme_arrangements(words, probs)

    def value(perm):
        return sum(q * words[k].count("1") for q, k in zip(probs, perm))

    best = max(value(p) for p in permutations(range(4)))
    worst = min(value(p) for p in permutations(range(4)))
    assert value(maximizing) == pytest.approx(best)
    assert value(minimizing) == pytest.approx(worst)


def test_extreme_arrangements_tie_break_is_lexicographic():
    # equal ones-counts: the lexicographically smaller codeword goes first
    words = ("0110", "1010", "0011")
    maximizing, minimizing = extreme_arrangements(words, (0.5, 0.3, 0.2))
    assert maximizing == (2, 0, 1)
    assert minimizing == (2, 0, 1)


def test_extreme_arrangements_requires_sorted_probs():
    with pytest.raises(ValueError, match="non-increasing"):
        extreme_arrangements(("0", "1"), (0.3, 0.7))


# -------------------------------------------------------------------- profile


def test_profile_micro_values():
    maximizing, minimizing = extreme_arrangements(("000", "110"), (0.638, 0.362))
    words = ("000", "110")
    n_plus = sum(q * words[k].count("1") for q, k in zip((0.638, 0.362), maximizing))
    n_minus = sum(q * words[k].count("1") for q, k in zip((0.638, 0.362), minimizing))
    assert n_plus == pytest.approx(1.276, abs=1e-3)
    assert n_minus == pytest.approx(0.724, abs=1e-3)


def test_profile_uniform_class_is_arrangement_invariant():
    dist = SymbolDistribution.from_weights([("a", 1), ("b", 1), ("c", 1), ("d", 1)])
    book = build_huffman(dist)
    profile = endpoint_profile(partition_by_length(book, dist), book)
    assert profile.size == 1
    assert profile.ones_max[0] == profile.ones_min[0] == 1  # mean ones of 00,01,10,11
    assert profile.coeffs[0] == 0


def test_profile_matches_raw_recomputation():
    dist = SymbolDistribution.from_weights([("a", 4), ("b", 3), ("c", 2), ("d", 1)])
    book = build_huffman(dist)
    part = partition_by_length(book, dist)
    profile = endpoint_profile(part, book)
    mean_len = sum(c.prob * c.length for c in part.classes)
    offset = sum(r * hi for r, hi in zip(profile.class_probs, profile.ones_max))
    offset = offset / mean_len - Fraction(1, 2)
    assert profile.offset == offset
    for j, cls in enumerate(part.classes):
        coeff = cls.prob * (profile.ones_min[j] - profile.ones_max[j]) / mean_len
        assert profile.coeffs[j] == coeff
        assert profile.ones_min[j] <= cls.expected_ones <= profile.ones_max[j]


def test_profile_coeffs_never_positive_and_rate_identity():
    rng = SplitMix64(606)
    for _ in range(25):
        dist = random_distribution(rng, 2 + rng.below(14))
        book = build_huffman(dist)
        part = partition_by_length(book, dist)
        profile = endpoint_profile(part, book)
        assert all(c <= 0 for c in profile.coeffs)
        for xs in product((0, 1), repeat=profile.size):
            recomputed = expected_ones_rate(apply_selection(book, part, xs), dist)
            assert profile.ones_rate(xs) == recomputed  # exact rationals


# -------------------------------------------------------------------- solvers


def test_exhaustive_single_class():
    sel = solve_exhaustive((-0.1,), 0.02)
    assert sel.choices == (0,)
    assert sel.objective == 0.02


def test_exhaustive_counts_candidates():
    sel = solve_exhaustive((-0.1,) * 6, 0.25)
    assert sel.evaluations == 64


def test_exhaustive_matches_independent_brute_force_bit_for_bit():
    rng = SplitMix64(1001)
    for _ in range(100):
        coeffs, offset = random_instance(rng, 12)
        sel = solve_exhaustive(coeffs, offset)
        obj, choices = brute_force_best(coeffs, offset)
        assert sel.choices == choices
        assert sel.objective == obj


def test_exhaustive_tie_break_lexicographic():
    # both classes shift by the same amount: (0, 1) and (1, 0) tie exactly
    sel = solve_exhaustive((Fraction(-1, 4), Fraction(-1, 4)), Fraction(3, 16))
    assert sel.choices == (0, 1)
    assert sel.objective == Fraction(1, 16)


def test_exhaustive_guard():
    with pytest.raises(ValueError, match="bisection or branch-and-bound"):
        solve_exhaustive((-0.5,) * 31, 0.1)
    with pytest.raises(ValueError, match="no classes"):
        solve_exhaustive((), 0.1)


def test_feasibility_trivial_cases():
    assert feasibility_search((-0.3, -0.2), 0.1, 0.1) == (0, 0)  # t >= |b|
    assert feasibility_search((-0.3,), 0.25, 0.01) is None
    with pytest.raises(ValueError, match="non-negative"):
        feasibility_search((-0.3,), 0.25, -1.0)


def test_feasibility_returns_lexicographically_smallest_witness():
    coeffs = (-0.4, -0.3, -0.1)
    offset = 0.35
    witness = feasibility_search(coeffs, offset, 0.06)
    candidates = [
        xs
        for xs in product((0, 1), repeat=3)
        if abs(sum(c for c, x in zip(coeffs, xs) if x) + offset) <= 0.06 + 1e-15
    ]
    assert witness == min(candidates)


def test_feasibility_verdict_matches_enumeration():
    rng = SplitMix64(2002)
    for _ in range(200):
        coeffs, offset = random_instance(rng, 14)
        values = [
            abs(sum(c for c, x in zip(coeffs, xs) if x) + offset)
            for xs in product((0, 1), repeat=len(coeffs))
        ]
        if rng.below(2):
            threshold = values[rng.below(len(values))]  # achievable: must be feasible
        else:
            threshold = rng.random() * max(values)
        witness = feasibility_search(coeffs, offset, threshold)
        feasible = min(values) <= threshold + 1e-15
        if feasible:
            assert witness is not None
            assert abs(sum(c for c, x in zip(coeffs, witness) if x) + offset) <= threshold + 1e-15
        else:
            assert witness is None


def test_bisection_single_class():
    sel = solve_bisection((-0.1,), 0.02, epsilon=1e-9)
    assert sel.choices == (0,)
    assert sel.objective == pytest.approx(0.02, abs=1e-9)


def test_bisection_matches_exhaustive():
    rng = SplitMix64(3003)
    for _ in range(100):
        coeffs, offset = random_instance(rng, 16)
        fast = solve_bisection(coeffs, offset, epsilon=1e-12)
        exact = solve_exhaustive(coeffs, offset)
        assert abs(fast.objective - exact.objective) <= 1e-9
        assert fast.choices == exact.choices


def test_bisection_iteration_budget():
    rng = SplitMix64(4004)
    epsilon = 1e-12
    for _ in range(30):
        coeffs, offset = random_instance(rng, 10)
        sel = solve_bisection(coeffs, offset, epsilon=epsilon)
        width = abs(offset)
        if width > epsilon:
            assert sel.iterations <= math.ceil(math.log2(width / epsilon))
        else:
            assert sel.iterations == 0


def test_bisection_validation():
    with pytest.raises(ValueError, match="epsilon"):
        solve_bisection((-0.1,), 0.3, epsilon=0.0)
    with pytest.raises(ValueError, match="not an achievable"):
        solve_bisection((-0.1,), 0.3, upper=0.01)
    # custom achievable bracket still converges to the optimum
    sel = solve_bisection((-0.1,), 0.3, upper=0.3)
    assert sel.choices == (1,)
    assert sel.objective == pytest.approx(0.2, abs=1e-9)


def test_branch_bound_matches_exhaustive():
    rng = SplitMix64(5005)
    for _ in range(100):
        coeffs, offset = random_instance(rng, 16)
        bb = solve_branch_bound(coeffs, offset)
        exact = solve_exhaustive(coeffs, offset)
        assert abs(bb.objective - exact.objective) <= 1e-12
        assert bb.choices == exact.choices


def test_branch_bound_large_instance_beats_random_sampling():
    rng = SplitMix64(6006)
    coeffs = [-rng.random() for _ in range(24)]
    offset = rng.random() - 0.5
    sel = solve_branch_bound(coeffs, offset)
    sampler = SplitMix64(6007)
    best_sampled = min(
        abs(sum(c for c in coeffs if sampler.below(2)) + offset) for _ in range(10**5)
    )
    assert sel.objective <= best_sampled


def test_all_solvers_agree_on_exact_ties():
    coeffs = (Fraction(-1, 4), Fraction(-1, 4), Fraction(-1, 16))
    offset = Fraction(5, 16)
    exact = solve_exhaustive(coeffs, offset)
    assert solve_branch_bound(coeffs, offset).choices == exact.choices
    assert solve_bisection(coeffs, offset, epsilon=1e-12).choices == exact.choices


def test_solve_dispatch():
    assert solve((-0.1,), 0.02, method="bb").choices == (0,)
    assert solve((-0.1,), 0.02, method="bisection").choices == (0,)
    with pytest.raises(ValueError, match="unknown solver"):
        solve((-0.1,), 0.02, method="magic")


def test_instance_json_round_trip(tmp_path):
    path = tmp_path / "instance.json"
    dump_instance(path, (-0.25, -0.125), 0.2, epsilon=1e-10)
    coeffs, offset, epsilon = load_instance(path)
    assert coeffs == [-0.25, -0.125]
    assert offset == 0.2
    assert epsilon == 1e-10


def test_instance_json_validation(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"a": [], "b": 0.1}', encoding="utf-8")
    with pytest.raises(ValueError, match="non-empty"):
        load_instance(bad)
    bad.write_text('{"b": 0.1}', encoding="utf-8")
    with pytest.raises(ValueError, match="fields 'a' and 'b'"):
        load_instance(bad)
    bad.write_text('{"a": ["x"], "b": 0.1}', encoding="utf-8")
    with pytest.raises(ValueError, match="non-numeric"):
        load_instance(bad)
