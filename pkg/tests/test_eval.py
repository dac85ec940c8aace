import pytest
from hypothesis import given, settings, strategies as st

from primedec.evaluate import eval_ground, solutions_in_range, witness_search
from primedec.syntax import And, Const, Divides, Eq, Neg, Not, Prime, PrimeN, Var, parse_formula
from oracles import naive_eval
from strategies import formulas, terms

VARS = ("x", "y", "z")


@pytest.mark.parametrize(
    "text, expected",
    [
        ("prime(-7)", True),
        ("prime[2](6)", True),
        ("prime[2](7)", False),
        ("prime(1)", False),
        ("prime[3](-9)", True),
        ("P[5](-10)", True),
        ("3 != 3", False),
    ],
)
def test_eval_examples(text, expected):
    assert eval_ground(parse_formula(text)) is expected


def test_eval_rejects_quantifiers():
    with pytest.raises(ValueError):
        eval_ground(parse_formula("exists x. prime(x)"))


@pytest.mark.parametrize(
    "text, expected",
    [
        ("prime(v) & prime(v+2)", 3),
        ("prime(v) & prime(v+1) & v != 2", -3),
        ("prime(2*v+1) & P[3](v)", 3),
        ("P[7](v) & prime(v)", 7),
        ("P[2](v) & prime(v) & v != 2", -2),
        ("P[4](v) & prime(v)", None),
        ("v = 5", 5),
    ],
)
def test_witness_examples(text, expected):
    assert witness_search("v", parse_formula(text), 100) == expected


def test_witness_respects_bound():
    assert witness_search("v", parse_formula("v = 101"), 100) is None
    assert witness_search("v", parse_formula("v = -100"), 100) == -100


def test_witness_large_values_fall_back_to_scalar_path():
    f = parse_formula("prime(1000000000*v + 7) & prime(v + 1)")
    w = witness_search("v", f, 50)
    brute = [x for x in sorted(range(-50, 51), key=lambda t: (abs(t), t < 0)) if naive_eval(f, {"v": x})]
    assert w == (brute[0] if brute else None)


def test_witness_rejects_other_variables():
    with pytest.raises(ValueError):
        witness_search("v", parse_formula("prime(v + y)"), 10)


# ---------------------------------------------------------------- properties


@settings(max_examples=1000, deadline=None)
@given(
    formulas(names=VARS, quantifiers=False, max_leaves=8, max_const=10**4),
    st.lists(st.tuples(*[st.integers(-10**4, 10**4)] * 3), min_size=10, max_size=10),
)
def test_agrees_with_naive_evaluator(f, envs):
    for vals in envs:
        env = dict(zip(VARS, vals))
        assert eval_ground(f, env) == naive_eval(f, env)


@settings(max_examples=300)
@given(terms(names=VARS, max_const=10**5), st.tuples(*[st.integers(-10**5, 10**5)] * 3))
def test_prime_symmetry(t, vals):
    env = dict(zip(VARS, vals))
    assert eval_ground(Prime(t), env) == eval_ground(Prime(Neg(t)), env)


def single_var_literal():
    lin = st.builds(
        lambda a, c: Var("v") if (a, c) == (1, 0) else parse_formula(f"{a}*v + {c} = 0").left,
        st.integers(-3, 3).filter(bool),
        st.integers(-20, 20),
    )
    atom = st.one_of(
        st.builds(Prime, lin),
        st.builds(PrimeN, st.integers(2, 3), lin),
        st.builds(Divides, st.integers(2, 6), lin),
        st.builds(lambda c: Eq(Var("v"), Const(c)), st.integers(-30, 30)),
    )
    return st.one_of(atom, st.builds(Not, atom))


@settings(max_examples=300, deadline=None)
@given(st.lists(single_var_literal(), min_size=1, max_size=4))
def test_witness_search_matches_exhaustive(lits):
    f = lits[0] if len(lits) == 1 else And(tuple(lits))
    order = sorted(range(-1000, 1001), key=lambda t: (abs(t), t < 0))
    brute = next((x for x in order if naive_eval(f, {"v": x})), None)
    assert witness_search("v", f, 1000) == brute
    sols = solutions_in_range("v", f, 60)
    assert sols == [x for x in order if abs(x) <= 60 and naive_eval(f, {"v": x})]
