"""Formula AST over {+, -, 0, 1, prime, prime[n], P[n]} with parser and printer.

Concrete syntax::

    formula := iff ; iff := imp ("<->" imp)* ; imp := or ("->" or)*
    or := and ("|" and)* ; and := unary ("&" unary)*
    unary := "!" unary | "exists" VAR "." formula | "forall" VAR "." formula
           | "(" formula ")" | atom
    atom := term ("=" | "!=") term | "prime" "(" term ")"
          | "prime" "[" NAT "]" "(" term ")" | "P" "[" NAT "]" "(" term ")"
          | "true" | "false"
    term := factor (("+" | "-") factor)*
    factor := INT "*" factor | "-" factor | INT | VAR | "(" term ")"

A quantifier body extends as far to the right as possible.  ``-`` directly
followed by an integer literal is read as a negative literal, so ``-2*x`` is
``Scale(-2, x)`` and ``-(2*x)`` is ``Neg(Scale(2, x))``.  ``->`` and ``<->``
associate to the left.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import ParseError

# --------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Add:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Sub:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Scale:
    factor: int
    term: "Term"


@dataclass(frozen=True)
class Neg:
    term: "Term"


Term = Union[Var, Const, Add, Sub, Scale, Neg]

# --------------------------------------------------------------------------
# Formulas


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


TRUE = Top()
FALSE = Bottom()


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Divides:
    """``P[n](t)``: n divides t."""

    n: int
    term: Term

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("divisibility modulus must be >= 2")


@dataclass(frozen=True)
class Prime:
    term: Term


@dataclass(frozen=True)
class PrimeN:
    """``prime[n](t)``: n divides t and t/n is a signed prime."""

    n: int
    term: Term

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("prime[n] subscript must be >= 2")


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    args: tuple

    def __post_init__(self):
        if len(self.args) < 2:
            raise ValueError("And needs at least two operands")


@dataclass(frozen=True)
class Or:
    args: tuple

    def __post_init__(self):
        if len(self.args) < 2:
            raise ValueError("Or needs at least two operands")


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Tagged:
    """Annotation node: semantically and textually identical to ``body``.

    The eliminator wraps the Dickson (infinite) branch and the finite-candidate
    disjuncts in tags so the decision step can report what a verdict relied on.
    """

    body: "Formula"
    tag: object  # must be hashable


Atom = Union[Eq, Divides, Prime, PrimeN, Top, Bottom]
Formula = Union[Atom, Not, And, Or, Implies, Iff, Exists, Forall, Tagged]

ATOM_TYPES = (Eq, Divides, Prime, PrimeN, Top, Bottom)
KEYWORDS = frozenset({"exists", "forall", "prime", "P", "true", "false"})

# --------------------------------------------------------------------------
# Traversal helpers


def term_vars(t: Term) -> set[str]:
    match t:
        case Var(name):
            return {name}
        case Const():
            return set()
        case Add(l, r) | Sub(l, r):
            return term_vars(l) | term_vars(r)
        case Scale(_, u) | Neg(u):
            return term_vars(u)
    raise TypeError(f"not a term: {t!r}")


def free_vars(f: Formula) -> set[str]:
    match f:
        case Top() | Bottom():
            return set()
        case Eq(l, r):
            return term_vars(l) | term_vars(r)
        case Divides(_, t) | Prime(t) | PrimeN(_, t):
            return term_vars(t)
        case Not(a) | Tagged(a, _):
            return free_vars(a)
        case And(args) | Or(args):
            return set().union(*(free_vars(a) for a in args))
        case Implies(l, r) | Iff(l, r):
            return free_vars(l) | free_vars(r)
        case Exists(v, b) | Forall(v, b):
            return free_vars(b) - {v}
    raise TypeError(f"not a formula: {f!r}")


def all_names(f: Formula) -> set[str]:
    """Every variable name occurring in f, bound or free."""
    match f:
        case Exists(v, b) | Forall(v, b):
            return all_names(b) | {v}
        case Not(a) | Tagged(a, _):
            return all_names(a)
        case And(args) | Or(args):
            return set().union(*(all_names(a) for a in args))
        case Implies(l, r) | Iff(l, r):
            return all_names(l) | all_names(r)
    return free_vars(f)


def is_quantifier_free(f: Formula) -> bool:
    match f:
        case Exists() | Forall():
            return False
        case Not(a) | Tagged(a, _):
            return is_quantifier_free(a)
        case And(args) | Or(args):
            return all(is_quantifier_free(a) for a in args)
        case Implies(l, r) | Iff(l, r):
            return is_quantifier_free(l) and is_quantifier_free(r)
    return True


def strip_tags(f: Formula) -> Formula:
    match f:
        case Tagged(b, _):
            return strip_tags(b)
        case Not(a):
            return Not(strip_tags(a))
        case And(args):
            return And(tuple(strip_tags(a) for a in args))
        case Or(args):
            return Or(tuple(strip_tags(a) for a in args))
        case Implies(l, r):
            return Implies(strip_tags(l), strip_tags(r))
        case Iff(l, r):
            return Iff(strip_tags(l), strip_tags(r))
        case Exists(v, b):
            return Exists(v, strip_tags(b))
        case Forall(v, b):
            return Forall(v, strip_tags(b))
    return f


def iter_tags(f: Formula) -> Iterator[Tagged]:
    match f:
        case Tagged(b, _):
            yield f
            yield from iter_tags(b)
        case Not(a):
            yield from iter_tags(a)
        case And(args) | Or(args):
            for a in args:
                yield from iter_tags(a)
        case Implies(l, r) | Iff(l, r):
            yield from iter_tags(l)
            yield from iter_tags(r)
        case Exists(_, b) | Forall(_, b):
            yield from iter_tags(b)


def rename_term(t: Term, mapping: dict) -> Term:
    match t:
        case Var(name):
            return Var(mapping.get(name, name))
        case Const():
            return t
        case Add(l, r):
            return Add(rename_term(l, mapping), rename_term(r, mapping))
        case Sub(l, r):
            return Sub(rename_term(l, mapping), rename_term(r, mapping))
        case Scale(k, u):
            return Scale(k, rename_term(u, mapping))
        case Neg(u):
            return Neg(rename_term(u, mapping))
    raise TypeError(t)


def _fresh(base: str, taken: set[str]) -> str:
    i = 1
    while f"{base}_{i}" in taken:
        i += 1
    return f"{base}_{i}"


def alpha_rename(f: Formula) -> Formula:
    """Rename binders so bound names are pairwise distinct and disjoint from free names."""
    taken = all_names(f)
    used = set(free_vars(f))

    def go(g: Formula, mapping: dict) -> Formula:
        match g:
            case Top() | Bottom():
                return g
            case Eq(l, r):
                return Eq(rename_term(l, mapping), rename_term(r, mapping))
            case Divides(n, t):
                return Divides(n, rename_term(t, mapping))
            case Prime(t):
                return Prime(rename_term(t, mapping))
            case PrimeN(n, t):
                return PrimeN(n, rename_term(t, mapping))
            case Not(a):
                return Not(go(a, mapping))
            case Tagged(a, tag):
                return Tagged(go(a, mapping), tag)
            case And(args):
                return And(tuple(go(a, mapping) for a in args))
            case Or(args):
                return Or(tuple(go(a, mapping) for a in args))
            case Implies(l, r):
                return Implies(go(l, mapping), go(r, mapping))
            case Iff(l, r):
                return Iff(go(l, mapping), go(r, mapping))
            case Exists(v, b) | Forall(v, b):
                new = v
                if v in used:
                    new = _fresh(v, taken)
                    taken.add(new)
                used.add(new)
                body = go(b, {**mapping, v: new})
                return type(g)(new, body)
        raise TypeError(g)

    return go(f, {})


# --------------------------------------------------------------------------
# Lexer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<int>[0-9]+)
  | (?P<ident>[a-zA-Z][a-zA-Z0-9_]*)
  | (?P<op><->|->|!=|[=&|!().\[\]+\-*])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "ident", "kw", "op", "eof"
    text: str
    line: int
    column: int

    def describe(self) -> str:
        return "end of input" if self.kind == "eof" else repr(self.text)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            if kind == "ident" and chunk in KEYWORDS:
                kind = "kw"
            tokens.append(Token(kind, chunk, line, col))
        for ch in chunk:
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


# --------------------------------------------------------------------------
# Parser


class _Backtrack(Exception):
    pass


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        # furthest failure, for error reporting
        self.fail_pos = -1
        self.fail_expected: set[str] = set()

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("op", "kw") and t.text == text

    def expect_fail(self, *expected: str):
        if self.pos > self.fail_pos:
            self.fail_pos, self.fail_expected = self.pos, set(expected)
        elif self.pos == self.fail_pos:
            self.fail_expected.update(expected)
        raise _Backtrack

    def eat(self, text: str) -> Token:
        if self.at(text):
            t = self.tok
            self.pos += 1
            return t
        self.expect_fail(repr(text))

    def error(self) -> ParseError:
        t = self.tokens[max(self.fail_pos, 0)]
        return ParseError(f"unexpected {t.describe()}", t.line, t.column, self.fail_expected)

    # formula levels

    def formula(self):
        return self.iff()

    def iff(self):
        left = self.imp()
        while self.at("<->"):
            self.pos += 1
            left = Iff(left, self.imp())
        return left

    def imp(self):
        left = self.or_()
        while self.at("->"):
            self.pos += 1
            left = Implies(left, self.or_())
        return left

    def or_(self):
        args = [self.and_()]
        while self.at("|"):
            self.pos += 1
            args.append(self.and_())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def and_(self):
        args = [self.unary()]
        while self.at("&"):
            self.pos += 1
            args.append(self.unary())
        return args[0] if len(args) == 1 else And(tuple(args))

    def unary(self):
        if self.at("!"):
            self.pos += 1
            return Not(self.unary())
        if self.at("exists") or self.at("forall"):
            kw = self.tok.text
            self.pos += 1
            if self.tok.kind != "ident":
                self.expect_fail("variable")
            v = self.tok.text
            self.pos += 1
            self.eat(".")
            body = self.formula()
            return Exists(v, body) if kw == "exists" else Forall(v, body)
        if self.at("("):
            start = self.pos
            try:
                return self.atom()
            except _Backtrack:
                self.pos = start
            self.pos += 1
            f = self.formula()
            self.eat(")")
            return f
        return self.atom()

    def nat(self) -> int:
        if self.tok.kind != "int":
            self.expect_fail("integer")
        n = int(self.tok.text)
        if n < 2:
            self.expect_fail("integer >= 2")
        self.pos += 1
        return n

    def atom(self):
        if self.at("true"):
            self.pos += 1
            return TRUE
        if self.at("false"):
            self.pos += 1
            return FALSE
        if self.at("prime"):
            self.pos += 1
            n = None
            if self.at("["):
                self.pos += 1
                n = self.nat()
                self.eat("]")
            self.eat("(")
            t = self.term()
            self.eat(")")
            return Prime(t) if n is None else PrimeN(n, t)
        if self.at("P"):
            self.pos += 1
            self.eat("[")
            n = self.nat()
            self.eat("]")
            self.eat("(")
            t = self.term()
            self.eat(")")
            return Divides(n, t)
        left = self.term()
        if self.at("="):
            self.pos += 1
            return Eq(left, self.term())
        if self.at("!="):
            self.pos += 1
            return Not(Eq(left, self.term()))
        self.expect_fail("'='", "'!='", "'+'", "'-'")

    def term(self):
        left = self.factor()
        while self.at("+") or self.at("-"):
            op = self.tok.text
            self.pos += 1
            right = self.factor()
            left = Add(left, right) if op == "+" else Sub(left, right)
        return left

    def factor(self):
        t = self.tok
        if t.kind == "int" or (self.at("-") and self.tokens[self.pos + 1].kind == "int"):
            sign = 1
            if t.kind != "int":
                sign = -1
                self.pos += 1
            k = sign * int(self.tok.text)
            self.pos += 1
            if self.at("*"):
                self.pos += 1
                return Scale(k, self.factor())
            return Const(k)
        if self.at("-"):
            self.pos += 1
            return Neg(self.factor())
        if t.kind == "ident":
            self.pos += 1
            return Var(t.text)
        if self.at("("):
            self.pos += 1
            inner = self.term()
            self.eat(")")
            return inner
        self.expect_fail("integer", "variable", "'('", "'-'")


def parse_formula(text: str, rename: bool = True) -> Formula:
    """Parse ``text``; bound variables are alpha-renamed apart unless ``rename`` is False."""
    p = _Parser(text)
    try:
        f = p.formula()
        if p.tok.kind != "eof":
            p.expect_fail("end of input", "'&'", "'|'", "'->'", "'<->'")
    except _Backtrack:
        raise p.error() from None
    return alpha_rename(f) if rename else f


def parse_term(text: str) -> Term:
    p = _Parser(text)
    try:
        t = p.term()
        if p.tok.kind != "eof":
            p.expect_fail("end of input")
    except _Backtrack:
        raise p.error() from None
    return t


# --------------------------------------------------------------------------
# Printer


def print_term(t: Term) -> str:
    match t:
        case Var(name):
            return name
        case Const(v):
            return str(v)
        case Add(l, r):
            return f"{print_term(l)} + {_operand(r)}"
        case Sub(l, r):
            return f"{print_term(l)} - {_operand(r)}"
        case Scale(k, u):
            return f"{k}*{_factor(u)}"
        case Neg(u):
            if isinstance(u, (Const, Scale)):
                return f"-({print_term(u)})"
            return f"-{_factor(u)}"
    raise TypeError(f"not a term: {t!r}")


def _factor(t: Term) -> str:
    if isinstance(t, (Add, Sub)):
        return f"({print_term(t)})"
    return print_term(t)


def _operand(t: Term) -> str:
    # right operand of + or -
    return _factor(t)


_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}


def _prec(f: Formula) -> int:
    if isinstance(f, Tagged):
        return _prec(f.body)
    return _PREC.get(type(f), 5)


def _open_ended(f: Formula) -> bool:
    """True if printing f leaves a quantifier whose body would swallow trailing text."""
    while True:
        if isinstance(f, Tagged):
            f = f.body
        elif isinstance(f, Not):
            f = f.arg
        else:
            return isinstance(f, (Exists, Forall))


def _child(f: Formula, parent_prec: int) -> str:
    s = print_formula(f)
    if _prec(f) <= parent_prec or _open_ended(f):
        return f"({s})"
    return s


def print_formula(f: Formula) -> str:
    match f:
        case Top():
            return "true"
        case Bottom():
            return "false"
        case Tagged(b, _):
            return print_formula(b)
        case Eq(l, r):
            return f"{print_term(l)} = {print_term(r)}"
        case Divides(n, t):
            return f"P[{n}]({print_term(t)})"
        case Prime(t):
            return f"prime({print_term(t)})"
        case PrimeN(n, t):
            return f"prime[{n}]({print_term(t)})"
        case Not(Eq(l, r)):
            return f"{print_term(l)} != {print_term(r)}"
        case Not(a):
            inner = print_formula(a)
            if _prec(a) < 5:
                inner = f"({inner})"
            return f"!{inner}"
        case And(args):
            return " & ".join(_child(a, 4) for a in args)
        case Or(args):
            return " | ".join(_child(a, 3) for a in args)
        case Implies(l, r):
            return f"{_child(l, 2)} -> {_child(r, 2)}"
        case Iff(l, r):
            return f"{_child(l, 1)} <-> {_child(r, 1)}"
        case Exists(v, b):
            return f"exists {v}. {print_formula(b)}"
        case Forall(v, b):
            return f"forall {v}. {print_formula(b)}"
    raise TypeError(f"not a formula: {f!r}")


def to_text(f) -> str:
    """Print a formula or a term."""
    if isinstance(f, (Var, Const, Add, Sub, Scale, Neg)):
        return print_term(f)
    return print_formula(f)
