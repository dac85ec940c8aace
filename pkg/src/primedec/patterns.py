"""Search tools for prime constellations, consecutive primes, primality patterns
in arithmetic progressions and independence-property witnesses.

Every search is a deterministic scan, so the result is the canonical least one.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .dickson import AffineMap, DicksonSystem, star_check
from .errors import AdmissibilityError, StarConditionError
from .numtheory import is_composite_signed, is_prime_signed

DEFAULT_BUDGET = 10**6


def _positive_prime(z: int) -> bool:
    return z > 1 and is_prime_signed(z)


# --------------------------------------------------------------------------
# Constellations


@dataclass
class Constellation:
    values: list
    complete: bool  # False when the budget ran out before `count` values were found

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)


def find_constellation(system: DicksonSystem, count: int, budget: int = DEFAULT_BUDGET) -> Constellation:
    """Least natural m with every prime map prime and every composite map composite."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if system.prime_maps:
        verdict = star_check(system.prime_maps)
        if not verdict.holds:
            raise StarConditionError(verdict.witness_prime)
    found = []
    for m in range(budget):
        if all(_positive_prime(f(m)) for f in system.prime_maps) and all(
            is_composite_signed(g(m)) for g in system.composite_maps
        ):
            found.append(m)
            if len(found) == count:
                return Constellation(found, True)
    return Constellation(found, False)


def find_consecutive_tuple(offsets, budget: int = DEFAULT_BUDGET) -> int | None:
    """Least x >= 2 with x+b_0 < ... < x+b_{n-1} consecutive primes."""
    b = list(offsets)
    if not b or any(y <= x for x, y in zip(b, b[1:])):
        raise ValueError("offsets must be nonempty and strictly increasing")
    verdict = star_check([(1, c) for c in b])
    if not verdict.holds:
        raise AdmissibilityError(
            verdict.witness_prime,
            f"offsets {b} cover every residue modulo {verdict.witness_prime}",
        )
    members = set(b)
    gaps = [c for c in range(b[0] + 1, b[-1]) if c not in members]
    system = DicksonSystem([(1, c) for c in b], [(1, c) for c in gaps])
    for x in range(2, 2 + budget):
        if all(_positive_prime(f(x)) for f in system.prime_maps) and all(
            not is_prime_signed(g(x)) for g in system.composite_maps
        ):
            return x
    return None


# --------------------------------------------------------------------------
# Arithmetic progressions with a prescribed primality pattern


@dataclass(frozen=True)
class PatternSpec:
    n: int
    s: frozenset

    def __post_init__(self):
        object.__setattr__(self, "s", frozenset(self.s))
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not all(0 <= t < self.n for t in self.s):
            raise ValueError(f"pattern {sorted(self.s)} not inside range({self.n})")


@dataclass(frozen=True)
class APResult:
    a: int
    b: int
    terms: tuple

    def pattern(self) -> frozenset:
        return frozenset(t for t, x in enumerate(self.terms) if is_prime_signed(x))


def _matches(a: int, b: int, spec: PatternSpec) -> bool:
    # primes first: they are rarer, so most candidates fail early
    for t in sorted(spec.s):
        if not _positive_prime(a * t + b):
            return False
    return all(is_composite_signed(a * t + b) for t in range(spec.n) if t not in spec.s)


def find_ap_pattern(
    spec: PatternSpec,
    budget: int = DEFAULT_BUDGET,
    b_window: int = 1000,
    proof_mode: bool = False,
) -> APResult | None:
    """Least (a, b) in lexicographic order with ``a*t + b`` prime exactly for t in s.

    Members of s must be (positive) primes and the other terms composite.  The
    grid is a >= 1 and 0 <= b < b_window; ``budget`` caps the number of
    (a, b) pairs examined.  With ``proof_mode`` the search instead fixes the
    base ``n! + 1`` and looks for a difference m making ``t*m + n! + 1``
    (t = 1..n) follow the pattern, then re-indexes the progression from t = 0.
    """
    if proof_mode:
        return _ap_by_constellation(spec, budget)
    examined = 0
    for a in itertools.count(1):
        for b in range(b_window):
            if examined >= budget:
                return None
            examined += 1
            if _matches(a, b, spec):
                return APResult(a, b, tuple(a * t + b for t in range(spec.n)))


def _ap_by_constellation(spec: PatternSpec, budget: int) -> APResult | None:
    base = math.factorial(spec.n) + 1
    primes = [AffineMap(t + 1, base) for t in range(spec.n) if t in spec.s]
    composites = [AffineMap(t + 1, base) for t in range(spec.n) if t not in spec.s]
    system = DicksonSystem(primes, composites)
    # m = 0 collapses the progression; start at 1
    for m in range(1, budget + 1):
        if all(_positive_prime(f(m)) for f in system.prime_maps) and all(
            is_composite_signed(g(m)) for g in system.composite_maps
        ):
            b = m + base
            return APResult(m, b, tuple(m * t + b for t in range(spec.n)))
    return None


# --------------------------------------------------------------------------
# Independence property


def _subsets(k: int) -> list[frozenset]:
    """Subsets of range(k) ordered by their binary encoding sum(2**l for l in s)."""
    return [frozenset(l for l in range(k) if code >> l & 1) for code in range(2**k)]


@dataclass
class ShatterResult:
    k: int
    offsets: tuple
    witnesses: dict = field(default_factory=dict)  # frozenset -> int

    def verify(self) -> bool:
        return all(
            is_prime_signed(b + a) == (j in s)
            for s, b in self.witnesses.items()
            for j, a in enumerate(self.offsets)
        ) and len(self.witnesses) == 2**self.k


def admissible_offsets(k: int) -> list[int]:
    """Greedy admissible tuple starting at 0: each new offset keeps star intact."""
    offsets = [0]
    c = 0
    while len(offsets) < k:
        c += 1
        if star_check([(1, o) for o in offsets + [c]]).holds:
            offsets.append(c)
    return offsets[:k]


def _signed_order():
    yield 0
    for k in itertools.count(1):
        yield k
        yield -k


def find_shattering(k: int, offsets=None, budget: int = DEFAULT_BUDGET) -> ShatterResult | None:
    """For every s ⊆ range(k) the least-|b| b_s with prime(b_s + a_j) iff j in s.

    ``offsets=None`` picks a greedy admissible tuple.  ``budget`` caps the
    number of candidates tried per subset.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    offs = admissible_offsets(k) if offsets is None else list(offsets)
    if len(offs) != k or len(set(offs)) != k:
        raise ValueError("need k distinct offsets")
    result = ShatterResult(k, tuple(offs))
    for s in _subsets(k):
        for tried, b in enumerate(_signed_order()):
            if tried >= budget:
                return None
            if all(is_prime_signed(b + a) == (j in s) for j, a in enumerate(offs)):
                result.witnesses[s] = b
                break
    return result


@dataclass
class IPWitnesses:
    """Witnesses of the n-independence property of prime(x + y_1 + ... + y_n)."""

    n: int
    k: int
    difference: int
    offsets: dict  # (i, j) -> a_{i,j}
    witnesses: dict  # frozenset of tuples (j_0..j_{n-1}) -> b_s
    progression: APResult

    def verify(self) -> bool:
        cells = list(itertools.product(range(self.k), repeat=self.n))
        for s, b in self.witnesses.items():
            for js in cells:
                total = b + sum(self.offsets[i, j] for i, j in enumerate(js))
                if is_prime_signed(total) != (js in s):
                    return False
        return len(self.witnesses) == 2 ** (self.k**self.n)


def _cell(l: int, n: int, k: int) -> tuple:
    """Digits (j_0..j_{n-1}) of l in base k, least significant first."""
    return tuple(l // k**i % k for i in range(n))


def ip_pattern(n: int, k: int) -> PatternSpec:
    """Primality pattern of the progression: block s has prime at l iff cell(l) in s."""
    size = k**n
    positions = set()
    for idx, s in enumerate(_subsets(size)):
        positions.update(idx * size + l for l in s)
    return PatternSpec(size * 2**size, frozenset(positions))


def build_ip_witnesses(n: int, k: int, budget: int = 2 * 10**5) -> IPWitnesses | None:
    """Offsets a_{i,j} = j*d*k**i and witnesses b_s from one progression.

    The progression has length k**n * 2**(k**n); block s (subsets in binary
    order) starts at b_s and its l-th term is prime iff the base-k digits of l
    form a tuple in s.  Returns None when the AP search exhausts ``budget``,
    which is expected for anything beyond the smallest (n, k).
    """
    if n < 1 or k < 1:
        raise ValueError("n and k must be >= 1")
    spec = ip_pattern(n, k)
    ap = find_ap_pattern(spec, budget=budget)
    if ap is None:
        return None
    size = k**n
    d = ap.a
    offsets = {(i, j): j * d * k**i for i in range(n) for j in range(k)}
    witnesses = {}
    for idx, s in enumerate(_subsets(size)):
        cells = frozenset(_cell(l, n, k) for l in s)
        witnesses[cells] = ap.terms[idx * size]
    return IPWitnesses(n, k, d, offsets, witnesses, ap)
