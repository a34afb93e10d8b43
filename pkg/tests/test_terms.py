from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nonstd_cones.coeff import RATIONALS, SQRT2
from nonstd_cones.errors import ArityError, DialectError, DomainError, ParseError
from nonstd_cones.series import EpsSeries, es_st, parse_point
from nonstd_cones.terms import (
    ZERO,
    Dialect,
    FieldScale,
    IntScale,
    Join,
    LinearForm,
    Meet,
    Neg,
    Sum,
    Var,
    absval,
    eval_real,
    eval_series,
    from_json,
    leaf_forms,
    parse,
    render,
    to_json,
)

from conftest import points

E = EpsSeries.eps
N = 3


def lgroup_terms(n=N):
    leaves = st.one_of(st.integers(0, n - 1).map(Var), st.just(ZERO))
    return st.recursive(
        leaves,
        lambda kids: st.one_of(
            st.tuples(kids, kids).map(lambda p: Sum(p)),
            kids.map(Neg),
            st.tuples(st.integers(2, 4), kids).map(lambda p: IntScale(*p)),
            st.tuples(kids, kids).map(lambda p: Meet(*p)),
            st.tuples(kids, kids).map(lambda p: Join(*p)),
        ),
        max_leaves=8,
    )


def riesz_terms(n=N):
    scalars = st.sampled_from([SQRT2.gen(), SQRT2.element([1, 1]), RATIONALS(Fraction(1, 2))])
    return st.recursive(
        lgroup_terms(n),
        lambda kids: st.one_of(
            st.tuples(scalars, kids).map(lambda p: FieldScale(*p)),
            st.tuples(kids, kids).map(lambda p: Meet(*p)),
        ),
        max_leaves=6,
    )


def oracle_eval(t, p):
    """Direct recursive evaluation over Fractions with min/max."""
    if isinstance(t, Var):
        return p[t.i]
    if isinstance(t, Sum):
        return sum((oracle_eval(s, p) for s in t.items), Fraction(0))
    if isinstance(t, Neg):
        return -oracle_eval(t.arg, p)
    if isinstance(t, IntScale):
        return t.k * oracle_eval(t.arg, p)
    if isinstance(t, Meet):
        return min(oracle_eval(t.left, p), oracle_eval(t.right, p))
    if isinstance(t, Join):
        return max(oracle_eval(t.left, p), oracle_eval(t.right, p))
    raise TypeError(t)


rational_points = st.lists(
    st.builds(Fraction, st.integers(-9, 9), st.integers(1, 4)), min_size=N, max_size=N
)


# -- worked values -------------------------------------------------------------


def test_parse_meet():
    assert parse("x0 /\\ x1", 2) == Meet(Var(0), Var(1))


def test_parse_t3():
    t = parse("0 /\\ x0 /\\ x1 /\\ (x0 - 3*x1)", 2, Dialect.LGROUP)
    assert isinstance(t, Meet)
    assert leaf_forms(t, 2) == {LinearForm.of(v) for v in [(0, 0), (1, 0), (0, 1), (1, -3)]}


def test_field_scalar_rejected_in_lgroup():
    with pytest.raises(DialectError):
        parse("th*x0", 1, Dialect.LGROUP, SQRT2)


def test_variable_out_of_range():
    with pytest.raises(ArityError):
        parse("x0 + x2", 2)


@pytest.mark.parametrize("text", ["x0 +", "x0 /\\", "(x0", "|x0", "x", "2*", "x0 ** x1", "x0 \\/ \\/ x1"])
def test_syntax_errors_carry_position(text):
    with pytest.raises(ParseError) as info:
        parse(text, 2)
    assert info.value.position is not None


def test_rational_scalars_in_lgroup_need_denominator():
    t = parse("1/2*x0 - x1", 2, Dialect.LGROUP, denominator=2)
    p = [RATIONALS(4), RATIONALS(1)]
    assert eval_real(t, p) == 2 * (Fraction(1, 2) * 4 - 1)
    with pytest.raises(DomainError):
        parse("1/2*x0 - x1", 2, Dialect.LGROUP, denominator=3)
    with pytest.raises(DomainError):
        parse("1/2*x0", 1, Dialect.LGROUP)


def test_eval_real_values():
    assert eval_real(parse("x0 /\\ x1"), [RATIONALS(2), RATIONALS(3)]) == 2
    t1 = parse("0 /\\ x0 /\\ x1 /\\ (x0 - x1)")
    assert eval_real(t1, [RATIONALS(2), RATIONALS(1)]) == 0


@pytest.mark.parametrize("n", [1, 2, 5, 40])
def test_tn_vanishes_at_one_epsilon(n):
    t = parse(f"0 /\\ x0 /\\ x1 /\\ (x0 - {n}*x1)")
    assert eval_series(t, [EpsSeries.const(1), E(1)]).is_zero()


def test_projection_at_appendix_point():
    assert eval_series(parse("x0"), parse_point("(e, 1, 0)")) == E(1)


def test_leaf_forms_examples():
    assert leaf_forms(parse("x0 - 2*x1")) == {LinearForm.of([1, -2])}
    assert leaf_forms(absval(Var(0))) == {LinearForm.of([1]), LinearForm.of([-1])}


def test_abs_sugar_and_render():
    t = parse("|x0 - x1|")
    assert t == absval(Sum((Var(0), Neg(Var(1)))))
    assert render(t) == "|x0 - x1|"


# -- properties ---------------------------------------------------------------------


@given(lgroup_terms(), rational_points)
def test_eval_real_matches_direct_oracle(t, p):
    assert eval_real(t, [RATIONALS(x) for x in p]).to_fraction() == oracle_eval(t, p)


@given(riesz_terms())
def test_parse_render_round_trip(t):
    assert parse(render(t), N, Dialect.RIESZ, SQRT2) == t


@given(riesz_terms())
def test_json_round_trip(t):
    assert from_json(to_json(t)) == t


@given(lgroup_terms(), rational_points, st.builds(Fraction, st.integers(0, 7), st.integers(1, 3)))
def test_positive_homogeneity(t, p, lam):
    a = eval_real(t, [RATIONALS(x * lam) for x in p])
    assert a == eval_real(t, [RATIONALS(x) for x in p]) * lam


@given(lgroup_terms(), rational_points)
def test_some_leaf_form_agrees(t, p):
    pt = [RATIONALS(x) for x in p]
    val = eval_real(t, pt)
    assert any(f.dot(pt) == val for f in leaf_forms(t, N))


@given(riesz_terms(), points(n=N, field=SQRT2))
def test_standard_part_exchange(t, x):
    if not all(a.is_limited() for a in x):
        return
    st_pt = [es_st(a) for a in x]
    assert es_st(eval_series(t, x)) == eval_real(t, st_pt)


@given(lgroup_terms(), rational_points)
def test_real_points_embed_as_constants(t, p):
    pt = [RATIONALS(x) for x in p]
    assert eval_series(t, [EpsSeries.const(a) for a in pt]) == EpsSeries.const(eval_real(t, pt))


@given(lgroup_terms(), points(n=N, field=RATIONALS))
def test_series_value_matches_tiny_epsilon(t, x):
    """Oracle: plug a concrete ε = 10^-40 into every coordinate and evaluate
    with min/max in high precision; the leading behaviour must agree."""
    mpmath.mp.dps = 150
    eps = mpmath.mpf(10) ** -40

    def num(a):
        return sum(
            (mpmath.mpf(c.coords[0].numerator) / c.coords[0].denominator)
            * mpmath.power(eps, mpmath.mpf(q.numerator) / q.denominator)
            for q, c in a.terms
        ) if a.terms else mpmath.mpf(0)

    def ev(t):
        if isinstance(t, Var):
            return num(x[t.i])
        if isinstance(t, Sum):
            return sum((ev(s) for s in t.items), mpmath.mpf(0))
        if isinstance(t, Neg):
            return -ev(t.arg)
        if isinstance(t, IntScale):
            return t.k * ev(t.arg)
        if isinstance(t, Meet):
            return min(ev(t.left), ev(t.right))
        return max(ev(t.left), ev(t.right))

    assert mpmath.almosteq(num(eval_series(t, x)), ev(t), abs_eps=mpmath.mpf(10) ** -130)
