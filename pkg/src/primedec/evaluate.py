"""Ground evaluation over the integers and bounded witness search."""

from __future__ import annotations

import numpy as np

from . import numtheory
from .normal import DIV, EQ, Literal, linearize_term, to_dnf
from .numtheory import CongruenceClass, crt_merge, solve_linear_congruence
from .syntax import (
    And,
    Bottom,
    Divides,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Prime,
    PrimeN,
    Tagged,
    Top,
    free_vars,
)


def eval_ground(f: Formula, env=None) -> bool:
    """Truth of a quantifier-free formula in the integers under ``env``."""
    env = env or {}
    match f:
        case Top():
            return True
        case Bottom():
            return False
        case Eq(l, r):
            return linearize_term(l).evaluate(env) == linearize_term(r).evaluate(env)
        case Divides(n, t):
            return linearize_term(t).evaluate(env) % n == 0
        case Prime(t):
            return numtheory.is_prime_signed(linearize_term(t).evaluate(env))
        case PrimeN(n, t):
            v = linearize_term(t).evaluate(env)
            return v % n == 0 and numtheory.is_prime_signed(v // n)
        case Not(a):
            return not eval_ground(a, env)
        case Tagged(b, _):
            return eval_ground(b, env)
        case And(args):
            return all(eval_ground(a, env) for a in args)
        case Or(args):
            return any(eval_ground(a, env) for a in args)
        case Implies(l, r):
            return not eval_ground(l, env) or eval_ground(r, env)
        case Iff(l, r):
            return eval_ground(l, env) == eval_ground(r, env)
        case Exists() | Forall():
            raise ValueError("eval_ground expects a quantifier-free formula")
    raise TypeError(f"not a formula: {f!r}")


# --------------------------------------------------------------------------
# Witness search

SIEVE_LIMIT = 1 << 26
_CHUNK = 1 << 15


class _PrimeTable:
    def __init__(self):
        self.table = np.zeros(2, dtype=bool)

    def upto(self, n: int) -> np.ndarray:
        if n >= len(self.table):
            size = max(n + 1, 2 * len(self.table))
            t = np.ones(size, dtype=bool)
            t[:2] = False
            for p in range(2, int(size**0.5) + 1):
                if t[p]:
                    t[p * p :: p] = False
            self.table = t
        return self.table


_primes = _PrimeTable()


def _single_var_literals(conj, v: str) -> list[tuple[Literal, int, int]]:
    out = []
    for lit in conj:
        if set(lit.term.variables) - {v}:
            raise ValueError(f"literal {lit} has variables other than {v}")
        out.append((lit, lit.term.coeff(v), lit.term.const))
    return out


def _congruence_class(lits) -> CongruenceClass | None:
    classes = []
    for lit, a, c in lits:
        if lit.kind == DIV and lit.positive:
            cls = solve_linear_congruence(a, c, lit.n)
            if cls is None:
                return None
            classes.append(cls)
    return crt_merge(classes)


def _ordered_candidates(cls: CongruenceClass, lo: int, hi: int) -> np.ndarray:
    """Members x of cls with lo <= |x| < hi, ordered by |x| then positive first."""
    r, m = cls.residue, cls.modulus
    start = lo + (r - lo) % m
    pos = np.arange(start, hi, m, dtype=np.int64)
    # negatives x = -y with y ≡ -r (mod m), y >= max(lo, 1)
    lo_n = max(lo, 1)
    start_n = lo_n + (-r - lo_n) % m
    negs = np.arange(start_n, hi, m, dtype=np.int64)
    keys = np.concatenate([2 * pos, 2 * negs + 1])
    xs = np.concatenate([pos, -negs])
    return xs[np.argsort(keys, kind="stable")]


def _mask(lits, xs: np.ndarray) -> np.ndarray:
    ok = np.ones(len(xs), dtype=bool)
    for lit, a, c in lits:
        vals = a * xs + c
        if lit.kind == EQ:
            hit = vals == 0
        elif lit.kind == DIV:
            hit = vals % lit.n == 0
        else:
            n = lit.n
            div = vals % n == 0
            q = np.abs(vals) // n
            table = _primes.upto(int(q.max()) if len(q) else 1)
            hit = div & table[q]
        ok &= hit if lit.positive else ~hit
        if not ok.any():
            break
    return ok


def _max_value(lits, bound: int) -> int:
    return max((abs(a) * bound + abs(c) for _, a, c in lits), default=0)


def _search_conj(lits, v: str, bound: int):
    cls = _congruence_class(lits)
    if cls is None:
        return None
    if _max_value(lits, bound) < SIEVE_LIMIT:
        lo = 0
        while lo <= bound:
            hi = min(lo + _CHUNK, bound + 1)
            xs = _ordered_candidates(cls, lo, hi)
            if len(xs):
                ok = _mask(lits, xs)
                idx = np.flatnonzero(ok)
                if len(idx):
                    return int(xs[idx[0]])
            lo = hi
        return None
    for k in range(bound + 1):
        for x in (k, -k) if k else (0,):
            if x in cls and all(lit.holds({v: x}) for lit, _, _ in lits):
                return x
    return None


def _order_key(x: int):
    return (abs(x), x < 0)


def witness_search(v: str, conj, bound: int) -> int | None:
    """Least |x| <= bound satisfying ``conj`` (positive before negative), or None.

    ``conj`` is a quantifier-free formula with at most the free variable ``v``,
    or a list of literals.  Candidates are stepped through the congruence class
    implied by the positive divisibility literals before any primality test.
    """
    if isinstance(conj, list):
        disjuncts = [conj]
    else:
        extra = free_vars(conj) - {v}
        if extra:
            raise ValueError(f"unexpected free variables {sorted(extra)}")
        disjuncts = to_dnf(conj)
    best = None
    for d in disjuncts:
        lits = _single_var_literals(d, v)
        x = _search_conj(lits, v, bound)
        if x is not None and (best is None or _order_key(x) < _order_key(best)):
            best = x
    return best


def solutions_in_range(v: str, conj, bound: int) -> list[int]:
    """All x in [-bound, bound] satisfying conj, in canonical order (test helper)."""
    disjuncts = [conj] if isinstance(conj, list) else to_dnf(conj)
    xs = _ordered_candidates(numtheory.TRIVIAL_CLASS, 0, bound + 1)
    ok = np.zeros(len(xs), dtype=bool)
    for d in disjuncts:
        ok |= _mask(_single_var_literals(d, v), xs)
    return [int(x) for x in xs[ok]]
