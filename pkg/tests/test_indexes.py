from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from nonstd_cones.coeff import RATIONALS, SQRT2, SQRT2_SQRT3
from nonstd_cones.errors import DialectError, DomainError, PreconditionError
from nonstd_cones.indexes import (
    Direction,
    Index,
    RationalSubspace,
    canonical_point,
    extend_index,
    index_of,
    is_z_reduced,
    lgroup_specializes,
    orthocomplement,
    orthogonal_decomposition,
    parse_index,
    rational_envelope,
    rational_envelope_via_annihilator,
    reduce,
    render_index,
    riesz_specializes,
    separating_form,
    sign_at_index,
    specializes,
    truncation_leq,
    vdot,
)
from nonstd_cones.sampling import Sampler
from nonstd_cones.series import EpsSeries, es_st
from nonstd_cones.terms import Dialect, LinearForm, eval_series

from conftest import elements, points

E = EpsSeries.eps
TH = SQRT2.gen()
e1, e2 = (1, 0), (0, 1)


def idx(*vecs, field=None):
    return Index.of(vecs, field)


@st.composite
def indexes(draw, field=None):
    fld = field or draw(st.sampled_from([RATIONALS, SQRT2, SQRT2_SQRT3]))
    seed = draw(st.integers(0, 10**6))
    n = draw(st.integers(1, 4))
    return Sampler(seed=seed).index(n, fld)


# -- decomposition -------------------------------------------------------------------


def test_decompose_one_epsilon():
    d = orthogonal_decomposition([1, E(1)])
    assert [p.alpha for p in d.parts] == [EpsSeries.const(1), E(1)]
    assert d.index() == idx(e1, e2)


def test_real_point_has_length_one_index():
    assert index_of([3, 4]) == idx((3, 4))
    assert index_of([3, 4]).dirs[0].vec == (RATIONALS(1), RATIONALS(Fraction(4, 3)))


def test_sqrt2_point_decomposition():
    x = [EpsSeries.const(1), EpsSeries.const(TH) + E(1)]
    v = index_of(x)
    assert v == idx((1, TH), (-TH, 1))
    assert v.dirs[1].vec == (SQRT2(-1), TH / 2)


def test_zero_point_has_no_index():
    with pytest.raises(DomainError):
        index_of([0, 0])


def test_non_orthogonal_index_rejected():
    with pytest.raises(DomainError):
        idx((1, 1), (1, 0))


def test_index_longer_than_dimension_rejected():
    with pytest.raises(DomainError):
        idx((1, 0), (0, 1), (0, 0))


# -- envelopes and complements --------------------------------------------------------


def test_envelope_examples():
    assert rational_envelope([(1, TH)], 2) == RationalSubspace.full(2)
    assert rational_envelope([(1, 2)], 2) == RationalSubspace.span(2, [(1, 2)])
    assert rational_envelope([(1, TH, 0)], 3) == RationalSubspace.span(3, [(1, 0, 0), (0, 1, 0)])


def test_orthocomplement_examples():
    assert orthocomplement(RationalSubspace.span(3, [])) == RationalSubspace.full(3)
    plane = RationalSubspace.span(3, [(1, 0, 0), (0, 1, 0)])
    assert orthocomplement(plane) == RationalSubspace.span(3, [(0, 0, 1)])
    assert orthocomplement(RationalSubspace.span(2, [(1, 2)])) == RationalSubspace.span(2, [(2, -1)])


def _theta_rank(vectors, field):
    rows = []
    for v in vectors:
        for k in range(field.degree):
            rows.append([sympy.Rational(a.coerce_to(field).coords[k]) for a in v])
    return sympy.Matrix(rows).rank() if rows else 0


@given(st.data())
def test_envelope_dimension_matches_sympy_rank(data):
    fld = data.draw(st.sampled_from([SQRT2, SQRT2_SQRT3]))
    n = data.draw(st.integers(1, 4))
    vecs = data.draw(st.lists(st.lists(elements(fld), min_size=n, max_size=n), max_size=3))
    env = rational_envelope(vecs, n)
    assert env.dim == _theta_rank(vecs, fld)
    assert all(env.contains(v) for v in vecs)
    assert env == rational_envelope_via_annihilator(vecs, n)
    assert env.dim + orthocomplement(env).dim == n


# -- reduction -------------------------------------------------------------------------


def test_sqrt2_triple_reduction():
    v = idx((1, TH, 0), (TH, -1, 1), (-TH, 1, 3))
    assert not is_z_reduced(v)
    assert reduce(v) == idx((1, TH, 0), (0, 0, 1))
    assert is_z_reduced(reduce(v))


def test_rational_and_single_indexes_are_reduced():
    assert is_z_reduced(idx(e1, e2))
    assert reduce(idx((1, 2), (2, -1))) == idx((1, 2), (2, -1))
    assert reduce(idx((1, TH))) == idx((1, TH))


@given(indexes())
def test_reduction_laws(v):
    r = reduce(v)
    assert reduce(r) == r
    assert (r == v) == is_z_reduced(v)
    for i in range(1, len(v) + 1):
        assert truncation_leq(reduce(v.prefix(i)), r)
        assert rational_envelope(v.prefix(i).vectors(), v.n) == rational_envelope(reduce(v.prefix(i)).vectors(), v.n)


@given(indexes(), st.integers(0, 10**6))
def test_lifting_lemma(v, seed):
    """extend_index(v, u) lies above v and reduces to u."""
    s = Sampler(seed=seed)
    u = reduce(v)
    # grow u by a rational direction orthogonal to env(u) when room is left
    comp = orthocomplement(rational_envelope(u.vectors(), v.n))
    if comp.dim:
        extra = tuple(RATIONALS(a) for a in comp.basis[s.rng.randrange(comp.dim)])
        u = Index(u.dirs + (Direction(extra),))
    w = extend_index(v, u)
    assert truncation_leq(v, w)
    assert reduce(w) == u


def test_lifting_precondition():
    with pytest.raises(PreconditionError):
        extend_index(idx(e1), idx(e2))


# -- order, signs and canonical points ---------------------------------------------------


def test_truncation_examples():
    assert truncation_leq(idx(e1), idx(e1, e2))
    assert truncation_leq(idx(e1, e2), idx(e1, e2))
    assert not truncation_leq(idx(e2), idx(e1, e2))


def test_sign_at_index_examples():
    v = idx(e1, e2)
    assert sign_at_index(LinearForm.of([0, 1]), v) == 1
    assert sign_at_index(LinearForm.of([1, 0]), idx(e2)) == 0
    assert sign_at_index(LinearForm.of([1, -1]), v) == 1
    with pytest.raises(DialectError):
        sign_at_index(LinearForm((TH, SQRT2(1))), v, Dialect.LGROUP)


@given(points(), st.data())
def test_sign_oracle_coherence(x, data):
    fld = x[0].field
    f = LinearForm(tuple(data.draw(elements(fld)) for _ in x))
    assert sign_at_index(f, index_of(x)) == eval_series(f.to_term(), x).sign()


def test_canonical_point_examples():
    assert canonical_point(idx(e1, e2)) == [EpsSeries.const(1), E(1)]
    assert canonical_point(idx((2, 3))) == [EpsSeries.const(1), EpsSeries.const(Fraction(3, 2))]
    v = idx((1, TH), (-TH, 1))
    assert canonical_point(v) == [EpsSeries.const(1) - E(1), EpsSeries.const(TH) + E(1).scale(TH / 2)]


@given(indexes())
def test_canonical_point_round_trip(v):
    assert index_of(canonical_point(v)) == v


@given(points())
def test_decomposition_invariants(x):
    d = orthogonal_decomposition(x)
    assert d.reconstruct() == x
    exps = [p.alpha.leading_exponent() for p in d.parts]
    assert exps == sorted(set(exps))
    assert all(p.alpha.sign() > 0 for p in d.parts)
    vs = d.index().vectors()
    assert all(vdot(vs[i], vs[j]).is_zero() for i in range(len(vs)) for j in range(i))
    assert index_of([a * 3 for a in x]) == d.index()


@given(points())
def test_standard_part_of_limited_point(x):
    if not all(a.is_limited() for a in x):
        return
    d = orthogonal_decomposition(x)
    lead = d.parts[0]
    assert [es_st(a) for a in x] == [es_st(lead.alpha) * c for c in lead.dir.vec]


# -- specialization and witnesses ----------------------------------------------------------


def test_specialization_examples():
    x = [EpsSeries.const(1), EpsSeries.const(TH) + E(1)]
    y = [1, TH]
    assert riesz_specializes([1, 0], [1, E(1)])
    assert not riesz_specializes(x, y)
    assert lgroup_specializes(x, y)
    assert lgroup_specializes([1, 0], [1, E(1)])
    assert not lgroup_specializes([0, 1], [1, E(1)])
    assert riesz_specializes(x, x)


def test_witness_examples():
    x = [EpsSeries.const(1), EpsSeries.const(TH) + E(1)]
    y = [1, TH]
    f = separating_form(x, y, Dialect.RIESZ)
    # a positive multiple of (√2, -1)
    assert (f.coeffs[0] + f.coeffs[1] * TH).is_zero() and f.coeffs[1].sign() < 0
    assert f.dot(y).is_zero() and f.dot(x).sign() < 0
    assert separating_form([0, 1], [1, 0], Dialect.LGROUP) == LinearForm.of([1, -1])
    with pytest.raises(PreconditionError):
        separating_form(x, y, Dialect.LGROUP)


def test_witness_for_strict_extension():
    f = separating_form([1, E(1)], [1, 0], Dialect.RIESZ)
    assert f.dot([1, 0]).is_zero()
    assert f.dot([0, 1]).sign() < 0


@given(points(n=3), points(n=3), st.sampled_from(list(Dialect)))
def test_witness_validity(x, y, dialect):
    if x[0].field != y[0].field or specializes(x, y, dialect):
        return
    f = separating_form(x, y, dialect)
    assert f.dot(y).sign() >= 0 > f.dot(x).sign()
    if dialect == Dialect.LGROUP:
        assert f.is_integer()


@given(indexes())
def test_index_text_round_trip(v):
    fld = v.dirs[0].vec[0].field
    for d in v.dirs:
        for c in d.vec:
            if c.field != RATIONALS:
                fld = c.field
    assert parse_index(render_index(v), v.n, fld) == v
    assert Index.from_json(v.to_json()) == v
