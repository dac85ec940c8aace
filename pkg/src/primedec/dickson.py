"""Finite machinery around Dickson's conjecture for affine maps a*x + b.

The star condition (no integer > 1 divides every product of the maps) only
has to be checked at primes below ``bound_N``, which depends on the leading
coefficients and the number of maps but not on the constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .normal import DIV, LinearTerm, conj, disj, lit_formula, make_literal
from .numtheory import primes_below
from .syntax import Formula


@dataclass(frozen=True, order=True)
class AffineMap:
    a: int
    b: int

    def __post_init__(self):
        if self.a < 1:
            raise ValueError(f"leading coefficient must be >= 1, got {self.a}")

    def __call__(self, x: int) -> int:
        return self.a * x + self.b

    def __str__(self):
        return f"{self.a}x{self.b:+d}"


def as_maps(maps) -> list[AffineMap]:
    return [m if isinstance(m, AffineMap) else AffineMap(*m) for m in maps]


@dataclass(frozen=True)
class DicksonSystem:
    """Maps required to be prime together with maps required to be composite."""

    prime_maps: tuple = ()
    composite_maps: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "prime_maps", tuple(as_maps(self.prime_maps)))
        object.__setattr__(self, "composite_maps", tuple(as_maps(self.composite_maps)))
        clash = set(self.prime_maps) & set(self.composite_maps)
        if clash:
            raise ValueError(f"maps required both prime and composite: {sorted(clash)}")


@dataclass(frozen=True)
class StarVerdict:
    holds: bool
    witness_prime: int | None = None

    def __bool__(self):
        return self.holds


def bound_N(maps) -> int:
    maps = as_maps(maps)
    if not maps:
        raise ValueError("bound_N needs at least one map")
    return max(max(m.a for m in maps), len(maps)) + 1


def _dedup(maps: list[AffineMap]) -> list[AffineMap]:
    return list(dict.fromkeys(maps))


def star_check(maps) -> StarVerdict:
    """Check the star condition by scanning residues modulo each prime below N."""
    maps = _dedup(as_maps(maps))
    if not maps:
        raise ValueError("star_check needs at least one map")
    for p in primes_below(bound_N(maps)):
        if not any(all((m.a * s + m.b) % p for m in maps) for s in range(p)):
            return StarVerdict(False, p)
    return StarVerdict(True)


def obstructing_primes(maps) -> list[int]:
    """All primes p < N at which every residue makes some map vanish mod p."""
    maps = _dedup(as_maps(maps))
    return [
        p
        for p in primes_below(bound_N(maps))
        if not any(all((m.a * s + m.b) % p for m in maps) for s in range(p))
    ]


def star_formula(coeffs, terms, denominators=None) -> Formula:
    """Quantifier-free formula in the parameters of ``terms`` expressing star.

    For each prime p < N, some residue r < p makes no ``coeffs[i]*r + terms[i]``
    divisible by p.  With ``denominators`` the i-th map is
    ``(coeffs[i]*x + terms[i]) / denominators[i]``; the quotient's leading
    coefficient is what N is computed from, and divisibility of the quotient
    by p is expressed as divisibility by ``p * denominators[i]``.
    """
    coeffs = list(coeffs)
    terms = [t if isinstance(t, LinearTerm) else LinearTerm.constant(t) for t in terms]
    if len(coeffs) != len(terms) or not coeffs:
        raise ValueError("coeffs and terms must be nonempty and of equal length")
    dens = list(denominators) if denominators is not None else [1] * len(coeffs)
    quotients = [a // d for a, d in zip(coeffs, dens)]
    N = max(max(quotients), len(quotients)) + 1
    by_prime = []
    for p in primes_below(N):
        branches = []
        for r in range(p):
            lits = [
                lit_formula(make_literal(DIV, p * d, t.shift(a * r), positive=False))
                for a, t, d in zip(coeffs, terms, dens)
            ]
            branches.append(conj(lits))
        by_prime.append(disj(branches))
    return conj(by_prime)


def star_formula_raw(coeffs, terms) -> Formula:
    """Unfolded star formula: literal ``!P[p](a*r + c)`` atoms, no constant folding."""
    from .normal import Literal
    from .syntax import And, Or, TRUE

    coeffs = list(coeffs)
    terms = [t if isinstance(t, LinearTerm) else LinearTerm.constant(t) for t in terms]
    N = max(max(coeffs), len(coeffs)) + 1
    by_prime = []
    for p in primes_below(N):
        branches = []
        for r in range(p):
            lits = tuple(Literal(DIV, p, t.shift(a * r), False).to_formula() for a, t in zip(coeffs, terms))
            branches.append(lits[0] if len(lits) == 1 else And(lits))
        by_prime.append(branches[0] if len(branches) == 1 else Or(tuple(branches)))
    if not by_prime:
        return TRUE
    return by_prime[0] if len(by_prime) == 1 else And(tuple(by_prime))


def shift_nonnegative(maps) -> tuple[list[AffineMap], int, int]:
    """Shift x -> x + l*K (K = N!) so that every constant becomes positive.

    Returns ``(shifted, l, K)``; the star verdict is unchanged because
    ``a*l*K`` vanishes modulo every prime below N.
    """
    maps = as_maps(maps)
    N = bound_N(maps)
    K = math.factorial(N)
    worst = min(m.b for m in maps)
    l = 0 if worst > 0 else (-worst) // K + 1
    shifted = [AffineMap(m.a, m.a * l * K + m.b) for m in maps]
    return shifted, l, K


def finite_candidates(coeffs, terms, maps_ground: bool = False) -> list[tuple[int, int, int]]:
    """Triples ``(p, i, sign)``: candidate equations ``coeffs[i]*x + terms[i] = sign*p``.

    Every solution of a star-failing positive system satisfies one of them.
    With ``maps_ground`` and constant terms, only the primes that actually
    obstruct star are kept, which is still complete.
    """
    coeffs = list(coeffs)
    if not coeffs:
        return []
    N = max(max(coeffs), len(coeffs)) + 1
    primes = primes_below(N)
    if maps_ground:
        consts = [t.const if isinstance(t, LinearTerm) else t for t in terms]
        if all(not isinstance(t, LinearTerm) or t.is_constant() for t in terms):
            primes = obstructing_primes(list(zip(coeffs, consts)))
    return [(p, i, s) for p in primes for i in range(len(coeffs)) for s in (1, -1)]
