"""Prime ideals of free ℓ-groups and Riesz spaces through indexes,
the C/V operators on finite data, v-cones, and a small polyhedral engine
(linearity fans) used as an independent oracle for n ≤ 3.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .coeff import RATIONALS, FieldElement
from .errors import ArityError, DomainError, InvariantError, PreconditionError
from .indexes import (
    Direction,
    Index,
    as_vector,
    canonical_point,
    is_z_reduced,
    truncation_leq,
    vdot,
    vector_field,
)
from .linalg import nullspace
from .series import EpsSeries, _join_fields
from .terms import (
    Dialect,
    LinearForm,
    Term,
    absval,
    check_term,
    eval_real,
    eval_series,
    leaf_forms,
    plus,
    variables,
)

FAN_MAX_ARITY = 3


# --------------------------------------------------------------------------
# prime ideals


@dataclass(frozen=True)
class PrimeIdealHandle:
    dialect: Dialect
    index: Index

    def __post_init__(self):
        object.__setattr__(self, "dialect", Dialect.parse(self.dialect))
        if self.dialect == Dialect.LGROUP and not is_z_reduced(self.index):
            raise PreconditionError("l-group prime ideals are named by Z-reduced indexes")

    def __str__(self):
        return f"P[{self.dialect.value}]{self.index}"


def vanishes_on_cone(t: Term, v: Index, dialect: "Dialect | str" = Dialect.RIESZ) -> bool:
    """Membership of t in the prime ideal named by v: t(v₁ + εv₂ + ⋯) = 0."""
    dialect = Dialect.parse(dialect)
    check_term(t, v.n, dialect)
    if dialect == Dialect.LGROUP and not is_z_reduced(v):
        raise PreconditionError("l-group membership needs a Z-reduced index")
    return eval_series(t, canonical_point(v)).is_zero()


def member(t: Term, h: PrimeIdealHandle) -> bool:
    return vanishes_on_cone(t, h.index, h.dialect)


def prime_leq(h1: PrimeIdealHandle, h2: PrimeIdealHandle) -> bool:
    """h1 ≤ h2 in the truncation order, i.e. P(h1) ⊇ P(h2)."""
    if h1.dialect != h2.dialect:
        raise DomainError("cannot compare prime ideals of different dialects")
    return truncation_leq(h1.index, h2.index)


def maximal_from_real_point(p: Sequence, dialect: "Dialect | str" = Dialect.RIESZ) -> PrimeIdealHandle:
    vec = as_vector(p)
    if all(a.is_zero() for a in vec):
        raise DomainError("the origin does not determine a maximal ideal")
    return PrimeIdealHandle(Dialect.parse(dialect), Index((Direction(vec),)))


# --------------------------------------------------------------------------
# Galois operators


def _zero_at(t: Term, x: Sequence) -> bool:
    return eval_series(t, x).is_zero()


def c_operator(S: Iterable[Sequence], T: Iterable[Term]) -> list[Term]:
    """Terms of T vanishing at every point of S."""
    S = [list(x) for x in S]
    return [t for t in T if all(_zero_at(t, x) for x in S)]


def v_operator(T: Iterable[Term], S: Iterable[Sequence]) -> list:
    """Points of S at which every term of T vanishes."""
    T = list(T)
    return [x for x in S if all(_zero_at(t, x) for t in T)]


def c_operator_real(S: Iterable[Sequence], T: Iterable[Term]) -> list[Term]:
    S = [list(x) for x in S]
    return [t for t in T if all(eval_real(t, x).is_zero() for x in S)]


def v_operator_real(T: Iterable[Term], S: Iterable[Sequence]) -> list:
    T = list(T)
    return [x for x in S if all(eval_real(t, x).is_zero() for t in T)]


# --------------------------------------------------------------------------
# v-cones


@dataclass(frozen=True)
class VCone:
    index: Index
    radii: tuple

    def __post_init__(self):
        radii = tuple(Fraction(r) for r in self.radii)
        object.__setattr__(self, "radii", radii)
        if len(radii) != len(self.index):
            raise DomainError("a v-cone needs one radius per direction")
        if any(r <= 0 for r in radii):
            raise DomainError("v-cone radii must be positive")

    def to_json(self) -> dict:
        return {"index": self.index.to_json(), "radii": [str(r) for r in self.radii]}


def vcone_generators(c: VCone) -> list[tuple]:
    """Partial sums Σ_{i≤j} rᵢ·vᵢ for j = 1..k."""
    fld = RATIONALS
    for d in c.index.dirs:
        fld = _join_fields(fld, vector_field(d.vec))
    acc = tuple(fld.zero() for _ in range(c.index.n))
    gens = []
    for r, d in zip(c.radii, c.index.dirs):
        acc = tuple(a + b * r for a, b in zip(acc, d.vec))
        gens.append(acc)
    return gens


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def vcone_samples(c: VCone, max_den: int = 8) -> list[tuple]:
    """Generators and the rational barycentric grid with denominators ≤ max_den."""
    gens = vcone_generators(c)
    seen = []
    keys = set()
    for den in range(1, max_den + 1):
        for comp in _compositions(den, len(gens)):
            pt = tuple(
                sum((g[i] * Fraction(a, den) for a, g in zip(comp, gens)), gens[0][i] * 0)
                for i in range(c.index.n)
            )
            if pt not in keys:
                keys.add(pt)
                seen.append(pt)
    return seen


def vcone_in_variety(
    t: Term, v: Index, dialect: "Dialect | str" = Dialect.RIESZ, m_max: int = 12, max_den: int = 8
) -> VCone | None:
    """Search radii (1, r, r², …), r = 2^-m for m = 1..m_max, such that t
    vanishes at the generators and on the sample grid of the v-cone.

    This is a sampling certificate, not a proof; None means the budget ran out.
    """
    dialect = Dialect.parse(dialect)
    check_term(t, v.n, dialect)
    for m in range(1, m_max + 1):
        r = Fraction(1, 2**m)
        cone = VCone(v, tuple(r**i for i in range(len(v))))
        if all(eval_real(t, p).is_zero() for p in vcone_samples(cone, max_den)):
            return cone
    return None


def in_enlarged_vcone(x: Sequence, c: VCone) -> bool:
    """x ∈ *C: x = Σ βⱼ·gⱼ with all βⱼ ≥ 0 (βⱼ hyperreal)."""
    x = [EpsSeries.lift(a) for a in x]
    dirs = c.index.dirs
    alphas = []
    for d in dirs:
        acc = EpsSeries.zero()
        for xi, di in zip(x, d.vec):
            acc = acc + xi.scale(di)
        alphas.append(acc.scale(d.norm2().inverse()))
    # x must lie in the span of the directions
    for i in range(len(x)):
        rebuilt = EpsSeries.zero()
        for a, d in zip(alphas, dirs):
            rebuilt = rebuilt + a.scale(d.vec[i])
        if rebuilt != x[i]:
            return False
    # αᵢ = rᵢ Σ_{j≥i} βⱼ
    k = len(dirs)
    scaled = [a.scale(Fraction(1) / r) for a, r in zip(alphas, c.radii)]
    betas = [scaled[i] - scaled[i + 1] for i in range(k - 1)] + [scaled[-1]]
    return all(b.sign() >= 0 for b in betas)


# --------------------------------------------------------------------------
# hyperplane arrangements


def _hyperplane_key(f: LinearForm) -> tuple:
    vec = f.coeffs
    for a in vec:
        if not a.is_zero():
            s = a.inverse()
            return tuple(b * s for b in vec)
    raise DomainError("zero form is not a hyperplane")


def _dedupe_hyperplanes(forms: Iterable[LinearForm]) -> list[LinearForm]:
    out = {}
    for f in forms:
        if f.is_zero():
            continue
        key = _hyperplane_key(f)
        out.setdefault(key, LinearForm(key))
    return list(out.values())


@dataclass(frozen=True)
class Face:
    signs: tuple  # one of -1, 0, +1 per hyperplane
    sample: tuple  # a point in the relative interior


class Arrangement:
    """Central hyperplane arrangement; enumerates all faces by sign vector.

    Faces of a flat F are obtained by pushing samples of the faces of its
    codimension-one subflats off the hyperplane, by a step small enough not
    to cross any other hyperplane.  A flat not cut by any hyperplane is a
    single face.
    """

    def __init__(self, n: int, hyperplanes: Sequence[LinearForm]):
        self.n = n
        self.hyperplanes = list(hyperplanes)
        fld = RATIONALS
        for h in self.hyperplanes:
            fld = _join_fields(fld, vector_field(h.coeffs))
        self.field = fld
        self._chambers: dict[frozenset, list[tuple]] = {}

    def _value(self, j: int, p) -> FieldElement:
        return vdot(self.hyperplanes[j].coeffs, p)

    def signs(self, p) -> tuple:
        return tuple(self._value(j, p).sign() for j in range(len(self.hyperplanes)))

    def _flat_basis(self, key: frozenset) -> list[tuple]:
        one = self.field.one()
        rows = [self.hyperplanes[j].coeffs for j in sorted(key)]
        if not rows:
            return [tuple(one if i == j else one * 0 for j in range(self.n)) for i in range(self.n)]
        return [tuple(v) for v in nullspace([list(r) for r in rows], self.n, one)]

    def _closure(self, basis: list[tuple]) -> frozenset:
        return frozenset(
            j for j in range(len(self.hyperplanes)) if all(self._value(j, b).is_zero() for b in basis)
        )

    def chamber_samples(self, key: frozenset) -> list[tuple]:
        """Samples of the relatively open chambers of the flat ∩_{j∈key} H_j."""
        if key in self._chambers:
            return self._chambers[key]
        basis = self._flat_basis(key)
        zero = tuple(self.field.zero() for _ in range(self.n))
        if not basis:
            result = [zero]
        else:
            cutting = [j for j in range(len(self.hyperplanes)) if j not in key]
            if not cutting:
                result = [basis[0]]
            else:
                samples: dict[tuple, tuple] = {}
                for j in cutting:
                    sub = self._closure(self._sub_basis(basis, j))
                    b = next(bb for bb in basis if not self._value(j, bb).is_zero())
                    for s in self.chamber_samples(sub):
                        delta = self._step(s, b)
                        for sgn in (1, -1):
                            p = tuple(si + bi * (delta * sgn) for si, bi in zip(s, b))
                            samples.setdefault(self.signs(p), p)
                result = list(samples.values())
        self._chambers[key] = result
        return result

    def _sub_basis(self, basis: list[tuple], j: int) -> list[tuple]:
        """Basis of flat ∩ H_j."""
        h = self.hyperplanes[j].coeffs
        vals = [vdot(h, b) for b in basis]
        piv = next(i for i, v in enumerate(vals) if not v.is_zero())
        out = []
        for i, b in enumerate(basis):
            if i == piv:
                continue
            c = vals[i] / vals[piv]
            out.append(tuple(x - y * c for x, y in zip(b, basis[piv])))
        return out

    def _step(self, s: tuple, b: tuple) -> Fraction:
        delta = None
        for j in range(len(self.hyperplanes)):
            gs = self._value(j, s)
            gb = self._value(j, b)
            if gs.is_zero() or gb.is_zero():
                continue
            bound = abs(gs) / (abs(gb) * 2)
            if delta is None or bound < delta:
                delta = bound
        if delta is None:
            return Fraction(1)
        if delta.is_rational():
            return delta.to_fraction()
        # a rational step strictly below the bound
        k = 8
        while True:
            tol = Fraction(1, 2**k)
            q = delta.approx(tol) - tol
            if q > 0:
                return q
            k += 8

    def faces(self) -> list[Face]:
        """Every face of the arrangement (all dimensions), one sample each."""
        flats = {self._closure(self._flat_basis(frozenset()))}
        frontier = list(flats)
        while frontier:
            nxt = []
            for key in frontier:
                basis = self._flat_basis(key)
                if not basis:
                    continue
                for j in range(len(self.hyperplanes)):
                    if j in key:
                        continue
                    sub = self._closure(self._sub_basis(basis, j))
                    if sub not in flats:
                        flats.add(sub)
                        nxt.append(sub)
            frontier = nxt
        out: dict[tuple, tuple] = {}
        for key in flats:
            for s in self.chamber_samples(key):
                out.setdefault(self.signs(s), s)
        return [Face(k, v) for k, v in out.items()]

    def chambers(self) -> list[Face]:
        key = self._closure(self._flat_basis(frozenset()))
        return [Face(self.signs(s), s) for s in self.chamber_samples(key)]


# --------------------------------------------------------------------------
# linearity fan


@dataclass(frozen=True)
class FanPiece:
    region: tuple  # of (LinearForm, ">=" | "<=" | "=")
    active_form: LinearForm
    sample: tuple

    def contains(self, x: Sequence) -> bool:
        """Region membership of a real or series point (series signs)."""
        for f, cond in self.region:
            val = f.dot([EpsSeries.lift(a) for a in x])
            s = val.sign() if val is not None else 0
            if cond == ">=" and s < 0 or cond == "<=" and s > 0 or cond == "=" and s != 0:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "region": [[f.to_json(), cond] for f, cond in self.region],
            "active_form": self.active_form.to_json(),
        }


def _guard(t: Term, n: int):
    if n > FAN_MAX_ARITY:
        raise ArityError(f"fan enumeration is limited to arity <= {FAN_MAX_ARITY}, got {n}")
    if max(variables(t), default=-1) >= n:
        raise ArityError(f"term uses variables beyond arity {n}")


def _active_at(t: Term, forms: Iterable[LinearForm], p: tuple) -> LinearForm:
    val = eval_real(t, p)
    for f in forms:
        if (vdot(f.coeffs, p) - val).is_zero():
            return f
    raise InvariantError("no leaf form matches the term at a sample point")


def _sign_cond(s: int) -> str:
    return ">=" if s > 0 else "<=" if s < 0 else "="


def linearity_fan(t: Term, n: int | None = None, all_faces: bool = False) -> list[FanPiece]:
    """Closed chambers of the arrangement of pairwise differences of leaf
    forms, each with the linear form t agrees with there.

    With ``all_faces`` every face of the arrangement is returned, zero
    signs becoming '=' conditions.
    """
    n = _arity(t, n)
    _guard(t, n)
    forms = sorted(leaf_forms(t, n), key=lambda f: [c.coords for c in f.coeffs])
    hyps = _dedupe_hyperplanes(f - g for f, g in itertools.combinations(forms, 2))
    arr = Arrangement(n, hyps)
    faces = arr.faces() if all_faces else arr.chambers()
    pieces = []
    for face in faces:
        active = _active_at(t, forms, face.sample)
        region = tuple((h, _sign_cond(s)) for h, s in zip(hyps, face.signs))
        pieces.append(FanPiece(region, active, face.sample))
    return pieces


def fan_vanishes_at(pieces: Sequence[FanPiece], x: Sequence) -> bool:
    """Fan-based zero test: some piece contains x and its form kills x."""
    xs = [EpsSeries.lift(a) for a in x]
    hits = [p for p in pieces if p.contains(xs)]
    if not hits:
        raise InvariantError("point is not covered by the fan")
    verdicts = {p.active_form.dot(xs).is_zero() for p in hits}
    if len(verdicts) != 1:
        raise InvariantError("fan pieces disagree at a shared point")
    return verdicts.pop()


def fan_vanishes_on_cone(t: Term, v: Index) -> bool:
    return fan_vanishes_at(linearity_fan(t, v.n), canonical_point(v))


def _arity(t: Term, n: int | None) -> int:
    return max(variables(t), default=0) + 1 if n is None else n


def variety_is_origin(t: Term, n: int | None = None) -> bool:
    """True iff the real zero set of t is {0}.

    Faces of the arrangement refined by the leaf forms themselves: t agrees
    with one leaf form on each face and that form has constant sign there,
    so t vanishes on a face iff it vanishes at its sample.
    """
    n = _arity(t, n)
    _guard(t, n)
    forms = list(leaf_forms(t, n))
    hyps = _dedupe_hyperplanes(
        [f - g for f, g in itertools.combinations(forms, 2)] + forms
    )
    arr = Arrangement(n, hyps)
    for face in arr.faces():
        if all(a.is_zero() for a in face.sample):
            continue
        if eval_real(t, face.sample).is_zero():
            return False
    return True


def strong_unit_check(relator: Term, candidate: Term, n: int | None = None) -> bool:
    """Whether candidate is a strong order-unit modulo the principal ideal of
    relator: the real zero set of |relator| + |candidate| is {0}."""
    return variety_is_origin(plus(absval(relator), absval(candidate)), n)
