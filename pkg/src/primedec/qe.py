"""Quantifier elimination for (Z, +, 0, 1, Prime) in the language with P[n], prime[n].

One existential over a conjunction of literals is eliminated in three stages:

1. An equality ``m*v = t`` is used to substitute ``v := t/m`` under ``P[m](t)``.
2. Otherwise ``v`` is split as ``L*w + r`` where L is the lcm of every
   divisibility modulus and prime[n] subscript.  Divisibility literals become
   parameter conditions and each ``prime[n](m*v + t)`` becomes a prime literal
   on ``w`` whose quotient map ``(m*L*w + m*r + t) / n`` has integer coefficient.
3. The remaining system of (negated) prime literals and disequalities in ``w``
   is true iff either the star condition holds for the positive maps and no
   positive map coincides with a negative one (infinitely many solutions,
   assuming Dickson's conjecture), or one of the finitely many candidates
   ``q_i*w + c_i = ±p`` (p a prime below N) satisfies everything.

Both branches are emitted symbolically, so the result is a quantifier-free
formula in the remaining variables.  The infinite branch is wrapped in a
``Tagged`` node carrying a :class:`DicksonInstance` so verdicts can report
whether they depended on the conjecture.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import dickson
from .errors import NotASentenceError, ResourceLimitError
from .evaluate import eval_ground, witness_search
from .normal import (
    DEFAULT_DNF_CAP,
    DIV,
    EQ,
    PRIME,
    ClassifiedSystem,
    LinearTerm,
    Literal,
    classify,
    conj,
    disj,
    lit_formula,
    make_literal,
    neg,
    to_dnf,
)
from .numtheory import crt_merge, lcm, solve_linear_congruence
from .syntax import (
    FALSE,
    TRUE,
    And,
    Bottom,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Tagged,
    Top,
    free_vars,
    is_quantifier_free,
    iter_tags,
    print_formula,
    strip_tags,
)

DEFAULT_LCM_CAP = 10**6

# internal name for the residue-quotient variable; not a legal identifier in the grammar
_W = "·w"


@dataclass(frozen=True)
class DicksonInstance:
    """Positive maps ``(coeffs[i]*w + terms[i]/denominators[i])`` of one infinite branch."""

    var: str
    coeffs: tuple
    terms: tuple
    denominators: tuple

    def is_ground(self) -> bool:
        return all(t.is_constant() for t in self.terms)

    def maps_text(self) -> list[str]:
        out = []
        for q, t, d in zip(self.coeffs, self.terms, self.denominators):
            c = str(t) if d == 1 else f"({t})/{d}"
            out.append(f"{q}*{self.var} + {c}")
        return out

    def to_json(self) -> dict:
        return {
            "var": self.var,
            "coeffs": list(self.coeffs),
            "terms": [str(t) for t in self.terms],
            "denominators": list(self.denominators),
            "maps": self.maps_text(),
        }


@dataclass(frozen=True)
class FiniteCase:
    """Candidate ``q_i*w + c_i = sign*p`` of the finite branch; ``value`` is v when ground."""

    var: str
    prime: int
    index: int
    sign: int
    value: int | None = None

    def to_json(self) -> dict:
        return {"var": self.var, "prime": self.prime, "index": self.index, "sign": self.sign, "value": self.value}


@dataclass
class QEOutput:
    formula: Formula
    dickson_uses: list = field(default_factory=list)
    # a nontrivial Dickson branch was absorbed into an outer elimination
    absorbed_dickson: bool = False

    @property
    def text(self) -> str:
        return print_formula(self.formula)


@dataclass
class Verdict:
    value: bool
    conditional_on_dickson: bool
    trace: list = field(default_factory=list)
    qf_formula: Formula = TRUE
    witness: int | None = None

    def __bool__(self):
        return self.value


# --------------------------------------------------------------------------
# Substitution


def substitute_division(lit: Literal, v: str, t: LinearTerm, m: int):
    """Rewrite ``lit`` under ``v := t/m`` (the caller guards with ``P[m](t)``).

    ``a*v + c`` becomes ``(a*t + m*c)/m``: equalities are multiplied through,
    ``P[n]`` becomes ``P[n*m]`` and ``prime[n]`` becomes ``prime[n*m]``.
    Returns a canonical literal or a bool.
    """
    a = lit.term.coeff(v)
    if a == 0:
        return lit
    new = t.scale(a) + lit.term.without(v).scale(m)
    if lit.kind == EQ:
        return make_literal(EQ, 0, new, lit.positive)
    return make_literal(lit.kind, lit.n * m, new, lit.positive)


# --------------------------------------------------------------------------
# Elimination of one existential


@dataclass
class _PrimeSystem:
    """Literals over w.  Prime entries ``(d, a, A)`` mean prime[d](a*w + A) with d | a."""

    pos: list
    neg: list
    diseqs: list  # (b, B): b*w + B != 0


def _literal_over_w(kind, d, a, A, positive):
    return Literal(kind, d, LinearTerm.var(_W, a) + A, positive)


def _finite_branch(system: _PrimeSystem, var: str, L: int, r: int) -> list[Formula]:
    pos = system.pos
    quotients = [a // d for d, a, _ in pos]
    ground = all(A.is_constant() for _, _, A in pos)
    terms = [LinearTerm.constant(A.const // d) for d, _, A in pos] if ground else [A for _, _, A in pos]
    out = []
    for p, i, s in dickson.finite_candidates(quotients, terms, maps_ground=ground):
        d, a, A = pos[i]
        # q*w + A/d = s*p  <=>  w = (s*p*d - A)/a
        T = LinearTerm.constant(s * p * d) - A
        parts = [lit_formula(make_literal(DIV, a, T)) if a > 1 else TRUE]
        for positive, entries in ((True, system.pos), (False, system.neg)):
            for d2, a2, A2 in entries:
                lit = _literal_over_w(PRIME, d2, a2, A2, positive)
                parts.append(lit_formula(substitute_division(lit, _W, T, a)))
        for b, B in system.diseqs:
            lit = Literal(EQ, 0, LinearTerm.var(_W, b) + B, False)
            parts.append(lit_formula(substitute_division(lit, _W, T, a)))
        body = conj(parts)
        if isinstance(body, Bottom):
            continue
        value = None
        if T.is_constant() and T.const % a == 0:
            value = L * (T.const // a) + r
        out.append(Tagged(body, FiniteCase(var, p, i, s, value)))
    return out


def _eliminate_prime_system(system: _PrimeSystem, var: str, L: int, r: int, uses: list) -> Formula:
    system.pos = list(dict.fromkeys(system.pos))
    system.neg = list(dict.fromkeys(system.neg))
    if not system.pos:
        # only composite-type and disequality constraints: always infinitely many solutions
        return TRUE
    distinct = []
    for d, a, A in system.pos:
        for d2, a2, A2 in system.neg:
            if a * d2 == a2 * d:
                # same quotient coefficient: require A/d != A2/d2
                distinct.append(lit_formula(make_literal(EQ, 0, A.scale(d2) - A2.scale(d), False)))
    star = dickson.star_formula([a for _, a, _ in system.pos], [A for _, _, A in system.pos], [d for d, _, _ in system.pos])
    infinite = conj(distinct + [star])
    branches = []
    if not isinstance(infinite, Bottom):
        inst = DicksonInstance(
            var,
            tuple(a // d for d, a, _ in system.pos),
            tuple(A for _, _, A in system.pos),
            tuple(d for d, _, _ in system.pos),
        )
        uses.append(inst)
        branches.append(Tagged(infinite, inst))
    branches.extend(_finite_branch(system, var, L, r))
    return disj(branches)


def _eliminate_by_equality(system: ClassifiedSystem) -> Formula:
    v = system.var
    idx = min(range(len(system.equalities)), key=lambda i: system.equalities[i][0])
    m, t = system.equalities[idx]
    parts = [lit_formula(make_literal(DIV, m, t)) if m > 1 else TRUE]
    chosen = Literal(EQ, 0, LinearTerm.var(v, m) - t, True)
    skipped = False
    for lit in system.literals():
        if not skipped and lit == chosen:
            skipped = True
            continue
        parts.append(lit_formula(substitute_division(lit, v, t, m)))
    return conj(parts)


def residue_split(system: ClassifiedSystem, lcm_cap: int = DEFAULT_LCM_CAP):
    """Split ``v = L*w + r``; yields ``(L, r, guard, prime_system)`` branches.

    ``guard`` is a quantifier-free condition on the parameters; within it the
    original system (without parameter literals) holds at ``L*w + r`` iff the
    prime system holds at ``w``.
    """
    moduli = [n for _, n, _, _ in system.congruences]
    moduli += [n for _, n, _, _ in system.prime_literals if n > 1]
    L = lcm(*moduli)
    if L > lcm_cap:
        raise ResourceLimitError(f"residue modulus {L} exceeds cap {lcm_cap}")
    classes, neg_const, symbolic = [], [], []
    for positive, n, m, t in system.congruences:
        if t.is_constant():
            if positive:
                cls = solve_linear_congruence(m, t.const, n)
                if cls is None:
                    return
                classes.append(cls)
            else:
                neg_const.append((n, m, t.const))
        else:
            symbolic.append((positive, n, m, t))
    base = crt_merge(classes)
    if base is None:
        return
    for r in range(base.residue, L, base.modulus):
        if any((m * r + c) % n == 0 for n, m, c in neg_const):
            continue
        guards = [lit_formula(make_literal(DIV, n, t.shift(m * r), positive)) for positive, n, m, t in symbolic]
        pos, negs, optional = [], [], []
        for positive, n, m, t in system.prime_literals:
            A, a = t.shift(m * r), m * L
            if n > 1:
                g = make_literal(DIV, n, A)
                if positive:
                    guards.append(lit_formula(g))
                elif g is False:
                    continue
                elif g is not True:
                    optional.append((g, (n, a, A)))
                    continue
            (pos if positive else negs).append((n, a, A))
        base_guard = conj(guards)
        if isinstance(base_guard, Bottom):
            continue
        diseqs = [(m * L, LinearTerm.constant(m * r) - t) for m, t in system.disequalities]
        # a negated prime[n] literal is vacuous unless n divides its argument
        for choice in itertools.product((False, True), repeat=len(optional)):
            extra_guards, extra_negs = [], []
            for keep, (g, entry) in zip(choice, optional):
                extra_guards.append(lit_formula(g if keep else g.negate()))
                if keep:
                    extra_negs.append(entry)
            guard = conj([base_guard] + extra_guards)
            if isinstance(guard, Bottom):
                continue
            yield L, r, guard, _PrimeSystem(list(pos), negs + extra_negs, list(diseqs))


def eliminate_exists(v: str, system: ClassifiedSystem, lcm_cap: int = DEFAULT_LCM_CAP, uses=None) -> Formula:
    """Quantifier-free equivalent of ``exists v`` over a classified conjunction."""
    if uses is None:
        uses = []
    params = [lit_formula(l) for l in system.parameter_literals]
    if system.equalities:
        return conj(params + [_eliminate_by_equality(system)])
    branches = []
    for L, r, guard, psys in residue_split(system, lcm_cap):
        branches.append(conj([guard, _eliminate_prime_system(psys, v, L, r, uses)]))
    return conj(params + [disj(branches)])


# --------------------------------------------------------------------------
# Whole formulas


class _Eliminator:
    def __init__(self, dnf_cap: int, lcm_cap: int):
        self.dnf_cap = dnf_cap
        self.lcm_cap = lcm_cap
        self.uses: list = []
        self.absorbed = False

    def exists(self, v: str, body: Formula) -> Formula:
        if v not in free_vars(body):
            return body
        if any(isinstance(t.tag, DicksonInstance) for t in iter_tags(body)):
            self.absorbed = True
        out = []
        for d in to_dnf(body, self.dnf_cap):
            out.append(eliminate_exists(v, classify(d, v), self.lcm_cap, self.uses))
        return disj(out)

    def run(self, f: Formula) -> Formula:
        match f:
            case Not(a):
                return neg(self.run(a))
            case And(args):
                return conj(self.run(a) for a in args)
            case Or(args):
                return disj(self.run(a) for a in args)
            case Implies(l, r):
                l2, r2 = self.run(l), self.run(r)
                if isinstance(l2, (Top, Bottom)) or isinstance(r2, (Top, Bottom)):
                    return disj([neg(l2), r2])
                return Implies(l2, r2)
            case Iff(l, r):
                l2, r2 = self.run(l), self.run(r)
                if isinstance(l2, (Top, Bottom)):
                    return r2 if isinstance(l2, Top) else neg(r2)
                if isinstance(r2, (Top, Bottom)):
                    return l2 if isinstance(r2, Top) else neg(l2)
                return Iff(l2, r2)
            case Tagged(b, tag):
                return Tagged(self.run(b), tag)
            case Exists(v, b):
                return self.exists(v, self.run(b))
            case Forall(v, b):
                return neg(self.exists(v, neg(self.run(b))))
        return f


def qe_formula(f: Formula, dnf_cap: int = DEFAULT_DNF_CAP, lcm_cap: int = DEFAULT_LCM_CAP) -> QEOutput:
    """Eliminate every quantifier, innermost first."""
    if is_quantifier_free(f):
        return QEOutput(f)
    el = _Eliminator(dnf_cap, lcm_cap)
    out = el.run(f)
    return QEOutput(out, el.uses, el.absorbed)


# --------------------------------------------------------------------------
# Simplification


def simplify(f: Formula) -> Formula:
    """Strip tags, fold constants and apply Boolean absorption."""
    f = strip_tags(f)

    def go(g: Formula) -> Formula:
        match g:
            case Not(a):
                return neg(go(a))
            case And(args):
                return _absorb(conj(go(a) for a in args), And, Or)
            case Or(args):
                return _absorb(disj(go(a) for a in args), Or, And)
            case Implies(l, r):
                return go(Or((Not(l), r)))
            case Iff(l, r):
                l2, r2 = go(l), go(r)
                if isinstance(l2, (Top, Bottom)) or isinstance(r2, (Top, Bottom)):
                    return go(Or((And((l2, r2)), And((Not(l2), Not(r2))))))
                return Iff(l2, r2)
        return g

    return go(f)


def _absorb(f: Formula, outer, inner) -> Formula:
    if not isinstance(f, outer):
        return f
    atoms = set(f.args)
    kept = []
    for a in f.args:
        if isinstance(a, inner) and any(b in atoms for b in a.args):
            continue
        kept.append(a)
    build = conj if outer is And else disj
    return build(kept)


# --------------------------------------------------------------------------
# Decision


def _eval_flag(f: Formula, trace: list) -> tuple[bool, bool]:
    """(value, conditional): conditional if the value rests on a true Dickson branch."""
    match f:
        case Tagged(b, tag):
            val, cond = _eval_flag(b, trace)
            if val:
                if isinstance(tag, DicksonInstance):
                    cond = True
                    trace.append({"kind": "dickson", **tag.to_json()})
                elif isinstance(tag, FiniteCase):
                    trace.append({"kind": "finite", **tag.to_json()})
            return val, cond
        case Not(a):
            val, cond = _eval_flag(a, trace)
            return not val, cond
        case And(args) | Or(args):
            results = [_eval_flag(a, trace) for a in args]
            want = isinstance(f, Or)
            deciding = [c for v, c in results if v == want]
            if deciding:
                return want, all(deciding)
            return not want, any(c for _, c in results)
        case Implies(l, r):
            return _eval_flag(Or((Not(l), r)), trace)
        case Iff(l, r):
            (vl, cl), (vr, cr) = _eval_flag(l, trace), _eval_flag(r, trace)
            return vl == vr, cl or cr
    return eval_ground(f), False


def decide_sentence(
    f: Formula,
    dnf_cap: int = DEFAULT_DNF_CAP,
    lcm_cap: int = DEFAULT_LCM_CAP,
    search_bound: int | None = 10**4,
) -> Verdict:
    """Truth of a sentence in (Z, +, 0, 1, Prime), assuming Dickson's conjecture.

    ``conditional_on_dickson`` is set when the deciding path went through a
    true infinite branch, or (conservatively) when a nontrivial infinite branch
    was absorbed into an outer elimination.  For a true ``exists v. <qf>``
    sentence, a witness is searched up to ``search_bound``.
    """
    fv = free_vars(f)
    if fv:
        raise NotASentenceError(fv)
    out = qe_formula(f, dnf_cap, lcm_cap)
    trace: list = []
    value, cond = _eval_flag(out.formula, trace)
    cond = cond or out.absorbed_dickson
    if out.absorbed_dickson:
        trace.extend({"kind": "dickson", "absorbed": True, **u.to_json()} for u in out.dickson_uses if not u.is_ground())
    witness = None
    if value and search_bound and isinstance(f, Exists) and is_quantifier_free(f.body):
        witness = witness_search(f.var, f.body, search_bound)
    return Verdict(value, cond, trace, out.formula, witness)
