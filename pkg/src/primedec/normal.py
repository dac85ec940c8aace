"""Linear terms, literal canonicalization, DNF and per-variable classification."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache, reduce

from . import numtheory
from .errors import ResourceLimitError
from .syntax import (
    FALSE,
    TRUE,
    Add,
    And,
    Bottom,
    Const,
    Divides,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Neg,
    Not,
    Or,
    Prime,
    PrimeN,
    Scale,
    Sub,
    Tagged,
    Term,
    Top,
    Var,
)

DEFAULT_DNF_CAP = 10**5


# --------------------------------------------------------------------------
# Linear terms


@dataclass(frozen=True)
class LinearTerm:
    """sum(c * v for v, c in coeffs) + const, with coeffs sorted by name and nonzero."""

    coeffs: tuple = ()
    const: int = 0

    @classmethod
    def of(cls, coeffs=None, const: int = 0) -> "LinearTerm":
        items = sorted((v, c) for v, c in (coeffs or {}).items() if c)
        return cls(tuple(items), const)

    @classmethod
    def constant(cls, c: int) -> "LinearTerm":
        return cls((), c)

    @classmethod
    def var(cls, name: str, coeff: int = 1) -> "LinearTerm":
        return cls.of({name: coeff})

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def coeff(self, v: str) -> int:
        for name, c in self.coeffs:
            if name == v:
                return c
        return 0

    @property
    def variables(self) -> tuple:
        return tuple(v for v, _ in self.coeffs)

    def is_constant(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "LinearTerm") -> "LinearTerm":
        d = self.as_dict()
        for v, c in other.coeffs:
            d[v] = d.get(v, 0) + c
        return LinearTerm.of(d, self.const + other.const)

    def __neg__(self) -> "LinearTerm":
        return self.scale(-1)

    def __sub__(self, other: "LinearTerm") -> "LinearTerm":
        return self + (-other)

    def scale(self, k: int) -> "LinearTerm":
        if k == 0:
            return LinearTerm()
        return LinearTerm(tuple((v, c * k) for v, c in self.coeffs), self.const * k)

    def shift(self, k: int) -> "LinearTerm":
        return LinearTerm(self.coeffs, self.const + k)

    def without(self, v: str) -> "LinearTerm":
        return LinearTerm(tuple((n, c) for n, c in self.coeffs if n != v), self.const)

    def content(self) -> int:
        """gcd of all coefficients and the constant."""
        return reduce(math.gcd, (c for _, c in self.coeffs), abs(self.const))

    def coeff_gcd(self) -> int:
        return reduce(math.gcd, (c for _, c in self.coeffs), 0)

    def exact_div(self, k: int) -> "LinearTerm":
        return LinearTerm(tuple((v, c // k) for v, c in self.coeffs), self.const // k)

    def evaluate(self, env) -> int:
        return sum(c * env[v] for v, c in self.coeffs) + self.const

    def to_term(self) -> Term:
        """Canonical syntax: ``2*x - y + 1``."""
        acc = None
        for v, c in self.coeffs:
            mono = Var(v) if abs(c) == 1 else Scale(abs(c), Var(v))
            if acc is None:
                acc = mono if c > 0 else (Neg(Var(v)) if c == -1 else Scale(c, Var(v)))
            else:
                acc = Add(acc, mono) if c > 0 else Sub(acc, mono)
        if acc is None:
            return Const(self.const)
        if self.const > 0:
            acc = Add(acc, Const(self.const))
        elif self.const < 0:
            acc = Sub(acc, Const(-self.const))
        return acc

    def __str__(self):
        from .syntax import print_term

        return print_term(self.to_term())


@lru_cache(maxsize=1 << 16)
def linearize_term(t: Term) -> LinearTerm:
    match t:
        case Var(name):
            return LinearTerm.var(name)
        case Const(v):
            return LinearTerm.constant(v)
        case Add(l, r):
            return linearize_term(l) + linearize_term(r)
        case Sub(l, r):
            return linearize_term(l) - linearize_term(r)
        case Scale(k, u):
            return linearize_term(u).scale(k)
        case Neg(u):
            return -linearize_term(u)
    raise TypeError(f"not a term: {t!r}")


# --------------------------------------------------------------------------
# Literals

EQ, DIV, PRIME = "eq", "div", "prime"


@dataclass(frozen=True)
class Literal:
    """A possibly negated atom over a linear term.

    kind ``eq``: term = 0.  kind ``div``: n | term (n >= 2).
    kind ``prime``: prime_n(term), where n = 1 is the plain prime predicate.
    """

    kind: str
    n: int
    term: LinearTerm
    positive: bool = True

    def negate(self) -> "Literal":
        return Literal(self.kind, self.n, self.term, not self.positive)

    def mentions(self, v: str) -> bool:
        return self.term.coeff(v) != 0

    def holds(self, env) -> bool:
        return atom_holds(self.kind, self.n, self.term.evaluate(env)) == self.positive

    def to_formula(self) -> Formula:
        atom = _atom_formula(self.kind, self.n, self.term)
        return atom if self.positive else Not(atom)

    def __str__(self):
        from .syntax import print_formula

        return print_formula(self.to_formula())


def atom_holds(kind: str, n: int, value: int) -> bool:
    if kind == EQ:
        return value == 0
    if kind == DIV:
        return value % n == 0
    if value % n:
        return False
    return numtheory.is_prime_signed(value // n)


def _atom_formula(kind: str, n: int, t: LinearTerm) -> Formula:
    if kind == EQ:
        pos = LinearTerm(tuple((v, c) for v, c in t.coeffs if c > 0), max(t.const, 0))
        neg = LinearTerm(tuple((v, -c) for v, c in t.coeffs if c < 0), max(-t.const, 0))
        return Eq(pos.to_term(), neg.to_term())
    if kind == DIV:
        return Divides(n, t.to_term())
    return Prime(t.to_term()) if n == 1 else PrimeN(n, t.to_term())


def _first_sign(t: LinearTerm) -> int:
    return 1 if not t.coeffs or t.coeffs[0][1] > 0 else -1


def canonical_atom(kind: str, n: int, t: LinearTerm):
    """Canonical ``(kind, n, term)`` for an atom, or a bool when it is decided.

    Applies constant folding, content reduction and the sign symmetry of the
    eq/div/prime predicates so that equal atoms compare equal.
    """
    if t.is_constant():
        return atom_holds(kind, n, t.const)
    if kind == EQ:
        g = t.coeff_gcd()
        if t.const % g:
            return False
        t = t.exact_div(g)
        return (EQ, 0, t.scale(_first_sign(t)))
    if kind == DIV:
        t = LinearTerm.of({v: c % n for v, c in t.coeffs}, t.const % n)
        if t.is_constant():
            return t.const == 0
        g = math.gcd(n, t.content())
        if g > 1:
            n //= g
            t = t.exact_div(g)
            if n == 1:
                return True
        if math.gcd(n, t.coeff_gcd()) > 1:
            # content is coprime to n here, so gcd(n, coeffs) cannot divide const
            return False
        return (DIV, n, t)
    # prime_n
    g = math.gcd(n, t.content())
    if g > 1:
        n //= g
        t = t.exact_div(g)
    if n > 1 and math.gcd(n, t.coeff_gcd()) > 1:
        # n | t would force gcd(n, coeffs) | const, which fails after reduction
        return False
    return (PRIME, n, t.scale(_first_sign(t)))


def make_literal(kind: str, n: int, t: LinearTerm, positive: bool = True):
    """Canonical literal, or a bool if constant."""
    c = canonical_atom(kind, n, t)
    if isinstance(c, bool):
        return c == positive
    return Literal(c[0], c[1], c[2], positive)


def literal_of_atom(f: Formula, positive: bool = True):
    match f:
        case Top():
            return positive
        case Bottom():
            return not positive
        case Eq(l, r):
            return make_literal(EQ, 0, linearize_term(l) - linearize_term(r), positive)
        case Divides(n, t):
            return make_literal(DIV, n, linearize_term(t), positive)
        case Prime(t):
            return make_literal(PRIME, 1, linearize_term(t), positive)
        case PrimeN(n, t):
            return make_literal(PRIME, n, linearize_term(t), positive)
    raise TypeError(f"not an atom: {f!r}")


# --------------------------------------------------------------------------
# Formula builders with constant folding


def conj(items) -> Formula:
    out = []
    seen = set()
    for f in items:
        if isinstance(f, Bottom):
            return FALSE
        if isinstance(f, Top):
            continue
        parts = f.args if isinstance(f, And) else (f,)
        for p in parts:
            if p not in seen:
                seen.add(p)
                out.append(p)
    if not out:
        return TRUE
    return out[0] if len(out) == 1 else And(tuple(out))


def disj(items) -> Formula:
    out = []
    seen = set()
    for f in items:
        if isinstance(f, Top):
            return TRUE
        if isinstance(f, Bottom):
            continue
        parts = f.args if isinstance(f, Or) else (f,)
        for p in parts:
            if p not in seen:
                seen.add(p)
                out.append(p)
    if not out:
        return FALSE
    return out[0] if len(out) == 1 else Or(tuple(out))


def neg(f: Formula) -> Formula:
    if isinstance(f, Top):
        return FALSE
    if isinstance(f, Bottom):
        return TRUE
    if isinstance(f, Not):
        return f.arg
    return Not(f)


def lit_formula(lit) -> Formula:
    if lit is True:
        return TRUE
    if lit is False:
        return FALSE
    return lit.to_formula()


def conjunction_formula(lits) -> Formula:
    return conj(lit_formula(l) for l in lits)


# --------------------------------------------------------------------------
# NNF and DNF


def nnf(f: Formula, positive: bool = True) -> Formula:
    """Negation normal form over atoms; removes ->, <-> and tags."""
    match f:
        case Tagged(b, _):
            return nnf(b, positive)
        case Not(a):
            return nnf(a, not positive)
        case And(args):
            parts = [nnf(a, positive) for a in args]
            return conj(parts) if positive else disj(parts)
        case Or(args):
            parts = [nnf(a, positive) for a in args]
            return disj(parts) if positive else conj(parts)
        case Implies(l, r):
            return nnf(Or((Not(l), r)), positive)
        case Iff(l, r):
            if positive:
                return disj([conj([nnf(l), nnf(r)]), conj([nnf(l, False), nnf(r, False)])])
            return disj([conj([nnf(l), nnf(r, False)]), conj([nnf(l, False), nnf(r)])])
        case Exists() | Forall():
            raise ValueError("nnf expects a quantifier-free formula")
        case Top():
            return TRUE if positive else FALSE
        case Bottom():
            return FALSE if positive else TRUE
    return f if positive else Not(f)


def _add_literal(conjunction: dict, lit) -> bool:
    """Add lit to an ordered literal set; False if it becomes contradictory."""
    if lit is True:
        return True
    if lit is False:
        return False
    if lit.negate() in conjunction:
        return False
    conjunction[lit] = None
    return True


def to_dnf(f: Formula, cap: int = DEFAULT_DNF_CAP) -> list[list[Literal]]:
    """Disjunctive normal form as a list of literal conjunctions.

    An empty list means false; a list containing an empty conjunction means
    true.  Duplicate literals are merged and contradictory conjunctions dropped.
    """

    def go(g: Formula) -> list[dict]:
        match g:
            case Top():
                return [{}]
            case Bottom():
                return []
            case Or(args):
                out = []
                for a in args:
                    out.extend(go(a))
                    if len(out) > cap:
                        raise ResourceLimitError(f"DNF exceeds {cap} disjuncts")
                return out
            case And(args):
                acc = [{}]
                for a in args:
                    part = go(a)
                    if len(acc) * len(part) > cap:
                        raise ResourceLimitError(f"DNF exceeds {cap} disjuncts")
                    nxt = []
                    for c1 in acc:
                        for c2 in part:
                            merged = dict(c1)
                            if all(_add_literal(merged, l) for l in c2):
                                nxt.append(merged)
                    acc = nxt
                    if not acc:
                        break
                return acc
            case Not(atom):
                lit = literal_of_atom(atom, False)
            case _:
                lit = literal_of_atom(g, True)
        d: dict = {}
        return [d] if _add_literal(d, lit) else []

    result = go(nnf(f))
    # drop duplicate conjunctions, keep first occurrence order
    seen = set()
    out = []
    for c in result:
        key = frozenset(c)
        if key not in seen:
            seen.add(key)
            out.append(list(c))
    return out


def dnf_formula(disjuncts) -> Formula:
    return disj(conjunction_formula(c) for c in disjuncts)


# --------------------------------------------------------------------------
# Classification


@dataclass
class ClassifiedSystem:
    """Literals of one conjunction sorted by how they mention ``var``.

    equalities / disequalities: ``(m, t)`` for ``m*var = t`` (m >= 1).
    congruences: ``(positive, n, m, t)`` for ``[!]P[n](m*var + t)``.
    prime_literals: ``(positive, n, m, t)`` for ``[!]prime[n](m*var + t)``, m >= 1,
    n = 1 meaning plain prime.
    """

    var: str
    equalities: list = field(default_factory=list)
    disequalities: list = field(default_factory=list)
    congruences: list = field(default_factory=list)
    prime_literals: list = field(default_factory=list)
    parameter_literals: list = field(default_factory=list)

    def literals(self) -> list[Literal]:
        """Re-expand into literals (the inverse of classify, up to sign normalization)."""
        v = self.var
        out = []
        for m, t in self.equalities:
            out.append(Literal(EQ, 0, LinearTerm.var(v, m) - t, True))
        for m, t in self.disequalities:
            out.append(Literal(EQ, 0, LinearTerm.var(v, m) - t, False))
        for pos, n, m, t in self.congruences:
            out.append(Literal(DIV, n, LinearTerm.var(v, m) + t, pos))
        for pos, n, m, t in self.prime_literals:
            out.append(Literal(PRIME, n, LinearTerm.var(v, m) + t, pos))
        out.extend(self.parameter_literals)
        return out


def classify(disjunct, v: str) -> ClassifiedSystem:
    sys = ClassifiedSystem(v)
    for lit in disjunct:
        a = lit.term.coeff(v)
        if a == 0:
            sys.parameter_literals.append(lit)
            continue
        rest = lit.term.without(v)
        if lit.kind == EQ:
            # a*v + rest = 0  <=>  |a|*v = -sign(a)*rest
            m, t = abs(a), rest.scale(-1 if a > 0 else 1)
            (sys.equalities if lit.positive else sys.disequalities).append((m, t))
        elif lit.kind == DIV:
            sys.congruences.append((lit.positive, lit.n, a, rest))
        else:
            if a < 0:
                a, rest = -a, -rest
            sys.prime_literals.append((lit.positive, lit.n, a, rest))
    return sys
