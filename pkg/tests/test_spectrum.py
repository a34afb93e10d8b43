import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nonstd_cones.coeff import RATIONALS, SQRT2
from nonstd_cones.errors import ArityError, DialectError, DomainError, PreconditionError
from nonstd_cones.indexes import Index, canonical_point, index_of, reduce
from nonstd_cones.sampling import Sampler
from nonstd_cones.series import EpsSeries
from nonstd_cones.spectrum import (
    PrimeIdealHandle,
    VCone,
    c_operator,
    c_operator_real,
    fan_vanishes_at,
    in_enlarged_vcone,
    linearity_fan,
    maximal_from_real_point,
    prime_leq,
    strong_unit_check,
    v_operator,
    v_operator_real,
    vanishes_on_cone,
    variety_is_origin,
    vcone_generators,
    vcone_in_variety,
)
from nonstd_cones.terms import Dialect, LinearForm, absval, eval_real, eval_series, meet, parse, plus

E = EpsSeries.eps
TH = SQRT2.gen()
E12 = Index.of([(1, 0), (0, 1)])
T1 = "0 /\\ x0 /\\ x1 /\\ (x0 - x1)"
seeds = st.integers(0, 10**6)


def q(*xs):
    return tuple(RATIONALS(x) for x in xs)


# -- membership and the order ------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 7, 50])
def test_tn_in_prime_of_e1_e2(n):
    t = parse(f"0 /\\ x0 /\\ x1 /\\ (x0 - {n}*x1)", 2, Dialect.LGROUP)
    assert vanishes_on_cone(t, E12, Dialect.LGROUP)
    assert vanishes_on_cone(t, E12, Dialect.RIESZ)


def test_projection_not_in_prime():
    assert not vanishes_on_cone(parse("x0"), E12)


def test_sqrt2_line():
    t = parse("th*x0 - x1", 2, field=SQRT2)
    assert vanishes_on_cone(t, Index.of([(1, TH)]))


def test_lgroup_membership_needs_reduced_index():
    v = Index.of([(1, TH, 0), (TH, -1, 1)])
    with pytest.raises(PreconditionError):
        vanishes_on_cone(parse("x2"), v, Dialect.LGROUP)
    with pytest.raises(PreconditionError):
        PrimeIdealHandle(Dialect.LGROUP, v)


def test_lgroup_membership_rejects_field_scalars():
    with pytest.raises(DialectError):
        vanishes_on_cone(parse("th*x0", 2, field=SQRT2), E12, Dialect.LGROUP)


def test_prime_leq_examples():
    h1 = PrimeIdealHandle(Dialect.RIESZ, Index.of([(1, 0)]))
    h2 = PrimeIdealHandle(Dialect.RIESZ, E12)
    assert prime_leq(h1, h2)
    assert prime_leq(h2, h2)
    assert not prime_leq(PrimeIdealHandle(Dialect.RIESZ, Index.of([(0, 1)])), h2)
    with pytest.raises(DomainError):
        prime_leq(h1, PrimeIdealHandle(Dialect.LGROUP, E12))


def test_maximal_from_real_point():
    assert maximal_from_real_point([3, 4]).index == Index.of([(3, 4)])
    assert maximal_from_real_point([3, 4]) == maximal_from_real_point([6, 8])
    assert maximal_from_real_point([1, TH], Dialect.LGROUP).index == Index.of([(1, TH)])
    with pytest.raises(DomainError):
        maximal_from_real_point([0, 0])


# -- Galois operators ---------------------------------------------------------------


def test_c_and_v_examples():
    t1, x0 = parse(T1), parse("x0")
    S = [[EpsSeries.const(1), E(1)]]
    assert c_operator(S, [t1, x0]) == [t1]
    assert c_operator([], [t1, x0]) == [t1, x0]
    assert v_operator([t1], S) == S


@given(seeds)
def test_galois_connection(seed):
    s = Sampler(seed=seed, term_depth=2)
    v = s.rational_index(2)
    S = [s.point_with_index_prefix(v) for _ in range(3)] + [s.point(2) for _ in range(3)]
    T = [s.term(2) for _ in range(6)]
    for _ in range(5):
        Sp = [x for x in S if s.rng.random() < 0.5]
        Tp = [t for t in T if s.rng.random() < 0.5]
        lhs = all(t in c_operator(Sp, T) for t in Tp)
        rhs = all(any(x is y for y in v_operator(Tp, S)) for x in Sp)
        assert lhs == rhs


@given(seeds)
def test_real_trace_identities(seed):
    s = Sampler(seed=seed, term_depth=2)
    R = [s.real_point(2) for _ in range(5)] + [q(1, 0)]
    RS = [[EpsSeries.const(a) for a in p] for p in R]
    T = [s.term(2) for _ in range(6)]
    assert c_operator(RS, T) == c_operator_real(R, T)
    assert [i for i, p in enumerate(RS) if any(p is y for y in v_operator(T, RS))] == [
        i for i, p in enumerate(R) if any(p is y for y in v_operator_real(T, R))
    ]


@given(seeds)
def test_basic_closed_set_algebra(seed):
    s = Sampler(seed=seed, term_depth=2)
    t1, t2 = s.term(2), s.term(2)
    x = s.point_with_index_prefix(s.rational_index(2)) if seed % 2 else s.point(2)
    z1, z2 = eval_series(t1, x).is_zero(), eval_series(t2, x).is_zero()
    assert eval_series(meet(absval(t1), absval(t2)), x).is_zero() == (z1 or z2)
    assert eval_series(plus(absval(t1), absval(t2)), x).is_zero() == (z1 and z2)


# -- l-group / Riesz agreement on reduced indexes --------------------------------------------


@given(seeds)
def test_lgroup_terms_see_only_the_reduction(seed):
    s = Sampler(seed=seed, term_depth=3)
    w = s.index(3, SQRT2)
    v = reduce(w)
    for _ in range(5):
        t = s.term(3, Dialect.LGROUP)
        assert eval_series(t, canonical_point(w)).is_zero() == vanishes_on_cone(t, v, Dialect.LGROUP)


# -- v-cones ----------------------------------------------------------------------------------


def test_vcone_generators_examples():
    assert vcone_generators(VCone(E12, (1, 1))) == [q(1, 0), q(1, 1)]
    assert vcone_generators(VCone(E12, (1, Fraction(1, 2)))) == [q(1, 0), q(1, Fraction(1, 2))]
    assert vcone_generators(VCone(Index.of([(2, 3)]), (3,))) == [q(3, Fraction(9, 2))]


def test_vcone_rejects_bad_radii():
    with pytest.raises(DomainError):
        VCone(E12, (1, 0))
    with pytest.raises(DomainError):
        VCone(E12, (1,))


def test_vcone_search_examples():
    cone = vcone_in_variety(parse(T1), E12)
    assert cone is not None and cone.radii == (1, Fraction(1, 2))
    assert vcone_in_variety(parse("x0"), Index.of([(1, 0)])) is None
    cone = vcone_in_variety(parse("th*x0 - x1", 2, field=SQRT2), Index.of([(1, TH)]))
    assert cone is not None and cone.radii == (1,)


@given(seeds)
def test_cone_is_intersection_of_enlarged_vcones(seed):
    s = Sampler(seed=seed)
    v = s.rational_index(3)
    radii_tuples = [tuple(Fraction(s.rng.randint(1, 9), s.rng.randint(1, 9)) for _ in v.dirs) for _ in range(5)]
    cones = [VCone(v, r) for r in radii_tuples]
    # points of Cone(v): positive combinations with infinitesimally shrinking weights
    k = s.rng.randint(1, len(v))
    weights = [EpsSeries([(Fraction(i), RATIONALS(s.rng.randint(1, 5))), (Fraction(i + 1), RATIONALS(s.integer()))]) for i in range(k)]
    x = [sum((w.scale(d.vec[j]) for w, d in zip(weights, v.dirs)), EpsSeries.zero()) for j in range(v.n)]
    assert all(in_enlarged_vcone(x, c) for c in cones)
    if len(v) >= 2:
        # a point along the second direction alone has an incomparable index
        y = canonical_point(Index((v.dirs[1],)))
        assert not all(in_enlarged_vcone(y, c) for c in cones)


# -- fans ----------------------------------------------------------------------------------------


def test_fan_of_binary_meet():
    pieces = linearity_fan(parse("x0 /\\ x1"), 2)
    got = {(tuple(c for _, c in p.region), p.active_form) for p in pieces}
    assert got == {((">=",), LinearForm.of([0, 1])), (("<=",), LinearForm.of([1, 0]))}


def test_fan_of_abs():
    pieces = linearity_fan(parse("|x0|"), 1)
    assert {(p.region[0][1], p.active_form) for p in pieces} == {
        (">=", LinearForm.of([1])),
        ("<=", LinearForm.of([-1])),
    }


def test_fan_zero_set_of_t1():
    """Union of the zero sets of the pieces is {x, y >= 0, y <= x}."""
    pieces = linearity_fan(parse(T1), 2)
    for a, b in itertools.product(range(-4, 5), repeat=2):
        p = q(a, b)
        want = b >= 0 and b <= a
        assert fan_vanishes_at(pieces, p) == want


def test_fan_arity_guard():
    with pytest.raises(ArityError):
        linearity_fan(parse("x0 + x3"), 4)


@given(seeds)
def test_fan_pieces_agree_with_term(seed):
    s = Sampler(seed=seed, term_depth=3)
    n = s.rng.randint(1, 3)
    t = s.term(n, Dialect.LGROUP)
    pieces = linearity_fan(t, n, all_faces=seed % 2 == 0)
    for _ in range(10):
        p = s.real_point(n)
        hits = [pc for pc in pieces if pc.contains(p)]
        assert hits
        for pc in hits:
            assert pc.active_form.dot(p) == eval_real(t, p)


@given(seeds)
def test_enlargement_identity(seed):
    s = Sampler(seed=seed, term_depth=3)
    n = s.rng.randint(1, 3)
    t = s.term(n, Dialect.LGROUP)
    pieces = linearity_fan(t, n)
    for x in [s.point(n), canonical_point(s.rational_index(n))]:
        assert fan_vanishes_at(pieces, x) == eval_series(t, x).is_zero()


@given(seeds)
def test_three_oracle_agreement(seed):
    s = Sampler(seed=seed, term_depth=3)
    n = s.rng.randint(1, 3)
    t = s.term(n, Dialect.LGROUP)
    v = s.rational_index(n)
    a = vanishes_on_cone(t, v, Dialect.LGROUP)
    assert fan_vanishes_at(linearity_fan(t, n), canonical_point(v)) == a
    assert (vcone_in_variety(t, v, Dialect.LGROUP) is not None) == a


# -- zero sets and units ----------------------------------------------------------------------------


@pytest.mark.parametrize(
    "text, n, want",
    [("|x0| + |x1|", 2, True), ("x0 /\\ 0", 2, False), ("x0", 2, False), ("x0", 1, True), ("|x0| \\/ |x1 - x2|", 3, False)],
)
def test_variety_is_origin_examples(text, n, want):
    assert variety_is_origin(parse(text), n) == want


@given(seeds)
def test_variety_is_origin_never_misses_a_lattice_zero(seed):
    s = Sampler(seed=seed, term_depth=3)
    n = s.rng.randint(1, 3)
    t = s.term(n, Dialect.LGROUP)
    zeros = [
        p for p in itertools.product(range(-2, 3), repeat=n) if any(p) and eval_real(t, q(*p)).is_zero()
    ]
    if zeros:
        assert not variety_is_origin(t, n)


@pytest.mark.parametrize(
    "relator, candidate, n, want",
    [
        ("0", "|x0| + |x1|", 2, True),
        ("x1", "|x0|", 2, True),
        ("x2", "|x0| + |x1|", 3, True),
        ("0", "x0 \\/ 0", 2, False),
        ("x1", "x0 \\/ 0", 2, False),
        ("0", "|x0|", 2, False),
    ],
)
def test_strong_unit_corpus(relator, candidate, n, want):
    assert strong_unit_check(parse(relator), parse(candidate), n) == want


def test_index_of_canonical_point_of_handle():
    h = maximal_from_real_point([1, 2])
    assert index_of(canonical_point(h.index)) == h.index
