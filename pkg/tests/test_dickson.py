import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from primedec.dickson import (
    AffineMap,
    DicksonSystem,
    StarVerdict,
    bound_N,
    finite_candidates,
    obstructing_primes,
    shift_nonnegative,
    star_check,
    star_formula,
    star_formula_raw,
)
from primedec.evaluate import eval_ground
from primedec.normal import LinearTerm
from primedec.syntax import print_formula
from oracles import gcd_oracle, is_prime_td

MAPS = [(a, b) for a in range(1, 5) for b in range(-6, 7)]


def least_prime_factor(n):
    return next(p for p in range(2, n + 1) if n % p == 0)


@pytest.mark.parametrize("maps, N", [([(1, 0), (1, 2)], 3), ([(2, 1)], 3), ([(1, 5)], 2)])
def test_bound_N_examples(maps, N):
    assert bound_N(maps) == N


@pytest.mark.parametrize(
    "maps, verdict",
    [
        ([(1, 0), (1, 2)], StarVerdict(True)),
        ([(1, 0), (1, 1)], StarVerdict(False, 2)),
        ([(2, 2)], StarVerdict(False, 2)),
        ([(1, 0), (1, 2), (1, 4)], StarVerdict(False, 3)),
        ([(1, 0), (1, 2), (1, 6)], StarVerdict(True)),
    ],
)
def test_star_examples(maps, verdict):
    assert star_check(maps) == verdict
    g = gcd_oracle(maps)
    if verdict.holds:
        assert g == 1
    else:
        assert least_prime_factor(g) == verdict.witness_prime


def test_affine_map_and_system_invariants():
    with pytest.raises(ValueError):
        AffineMap(0, 1)
    with pytest.raises(ValueError):
        DicksonSystem([(1, 0)], [(1, 0)])
    assert AffineMap(2, 3)(5) == 13


def test_duplicates_are_ignored():
    assert star_check([(1, 0), (1, 0), (1, 2)]) == star_check([(1, 0), (1, 2)])


def test_star_oracle_small_sample():
    # full sweep lives in the acceptance suite
    rng = random.Random(7)
    for _ in range(500):
        maps = rng.sample(MAPS, rng.randint(1, 3))
        v = star_check(maps)
        g = gcd_oracle(maps)
        assert v.holds == (g == 1)
        if not v.holds:
            assert v.witness_prime == least_prime_factor(g)
            assert v.witness_prime < bound_N(maps)


def test_star_formula_symbolic_example():
    y = LinearTerm.var("y")
    f = star_formula([1, 1], [LinearTerm.constant(0), y])
    # only p = 2; residue 0 is blocked by the first map, residue 1 needs y even
    assert print_formula(f) == "!P[2](y + 1)"
    raw = star_formula_raw([1, 1], [LinearTerm.constant(0), y])
    assert print_formula(raw) == "!P[2](0) & !P[2](y) | !P[2](1) & !P[2](y + 1)"
    for yv in range(-10, 11):
        assert eval_ground(f, {"y": yv}) == eval_ground(raw, {"y": yv}) == (yv % 2 == 0)


def test_star_formula_ground_examples():
    assert eval_ground(star_formula([1, 1], [0, 2]))
    assert not eval_ground(star_formula([1, 1], [0, 1]))


@pytest.mark.parametrize(
    "maps, shifted, l, K",
    [
        ([(1, -3)], [(1, 1)], 2, 2),
        ([(1, 0), (1, 2)], [(1, 6), (1, 8)], 1, 6),
        ([(2, -5)], [(2, 7)], 1, 6),
        ([(1, 3)], [(1, 3)], 0, 2),
    ],
)
def test_shift_examples(maps, shifted, l, K):
    out, l_, K_ = shift_nonnegative(maps)
    assert [(m.a, m.b) for m in out] == shifted
    assert (l_, K_) == (l, K)
    assert star_check(out) == star_check(maps)


def test_finite_candidates_examples():
    assert finite_candidates([1, 1], [0, 1]) == [(2, 0, 1), (2, 0, -1), (2, 1, 1), (2, 1, -1)]
    assert finite_candidates([1], [0]) == []
    assert finite_candidates([2], [0]) == [(2, 0, 1), (2, 0, -1)]
    # ground restriction keeps only obstructing primes
    assert {p for p, _, _ in finite_candidates([1, 1, 1], [0, 2, 4], maps_ground=True)} == {3}
    assert obstructing_primes([(1, 0), (1, 2), (1, 4)]) == [3]


# ---------------------------------------------------------------- properties

map_lists = st.lists(
    st.tuples(st.integers(1, 6), st.integers(-30, 30)), min_size=1, max_size=4
)


@settings(max_examples=300)
@given(map_lists)
def test_star_formula_agrees_with_star_check(maps):
    coeffs = [a for a, _ in maps]
    consts = [b for _, b in maps]
    holds = star_check(maps).holds
    assert eval_ground(star_formula(coeffs, consts)) == holds
    assert eval_ground(star_formula_raw(coeffs, consts)) == holds


@settings(max_examples=300)
@given(map_lists)
def test_monotonicity(maps):
    if star_check(maps).holds:
        for r in range(1, len(maps)):
            for sub in itertools.combinations(maps, r):
                assert star_check(list(sub)).holds


@settings(max_examples=300)
@given(map_lists)
def test_shift_invariance(maps):
    shifted, l, K = shift_nonnegative(maps)
    assert K == math.factorial(bound_N(maps))
    assert all(m.b > 0 for m in shifted)
    assert l == 0 or any((l - 1) * K + b <= 0 for _, b in maps)
    assert star_check(shifted) == star_check(maps)


def _signed_prime_values(maps, m):
    return all(is_prime_td(a * m + b) for a, b in maps)


def test_solution_count_link():
    rng = random.Random(11)
    holding, failing = [], []
    while len(holding) < 12 or len(failing) < 12:
        maps = rng.sample([(a, b) for a in range(1, 3) for b in range(-6, 7)], rng.randint(1, 3))
        (holding if star_check(maps).holds else failing).append(maps)
    for maps in holding[:12]:
        k = len(maps)
        count = 0
        for m in range(10**5 + 1):
            if _signed_prime_values(maps, m):
                count += 1
                if count > 2 * k:
                    break
        assert count > 2 * k, maps
    for maps in failing[:12]:
        coeffs = [a for a, _ in maps]
        cands = finite_candidates(coeffs, [b for _, b in maps])
        for m in range(-10**4, 10**4 + 1):
            if _signed_prime_values(maps, m):
                assert any(coeffs[i] * m + maps[i][1] == s * p for p, i, s in cands), (maps, m)
