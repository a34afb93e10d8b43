"""Indexes of hyperreal points: orthogonal decomposition, rational
envelopes, Z-reduction, truncation order, specialization and separating
linear forms.

Directions are stored with canonical positive scaling (first nonzero
coordinate of absolute value 1) instead of unit length, so everything stays
inside the coefficient field.  All predicates used here are invariant under
positive rescaling of individual directions.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

from ._lexer import TokenStream
from .coeff import RATIONALS, FieldElement, NumberField, parse_field_expr
from .errors import ArityError, DialectError, DomainError, InvariantError, PreconditionError
from .linalg import clear_denominators, nullspace, rref, solve
from .series import EpsSeries, _join_fields
from .terms import Dialect, LinearForm

Vector = tuple  # of FieldElement


def as_vector(values: Iterable, field: NumberField | None = None) -> Vector:
    fld = field or RATIONALS
    out = [v if isinstance(v, FieldElement) else fld(v) for v in values]
    for v in out:
        fld = _join_fields(fld, v.field)
    return tuple(v.coerce_to(fld) for v in out)


def vdot(u: Sequence[FieldElement], v: Sequence[FieldElement]) -> FieldElement:
    acc = u[0] * v[0]
    for a, b in zip(u[1:], v[1:]):
        acc = acc + a * b
    return acc


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, u):
    return tuple(a * c for a in u)


def vector_field(v: Sequence[FieldElement]) -> NumberField:
    fld = RATIONALS
    for a in v:
        fld = _join_fields(fld, a.field)
    return fld


def canonical(vec: Sequence) -> Vector:
    """Positive rescaling making the first nonzero coordinate ±1."""
    vec = as_vector(vec)
    for a in vec:
        if not a.is_zero():
            return vscale(abs(a).inverse(), vec)
    raise DomainError("the zero vector has no direction")


@dataclass(frozen=True)
class Direction:
    vec: Vector

    def __post_init__(self):
        object.__setattr__(self, "vec", canonical(self.vec))

    @property
    def n(self) -> int:
        return len(self.vec)

    def norm2(self) -> FieldElement:
        return vdot(self.vec, self.vec)

    def is_rational(self) -> bool:
        return all(a.is_rational() for a in self.vec)

    def __str__(self):
        return "(" + ", ".join(str(a) for a in self.vec) + ")"

    def to_json(self) -> list:
        return [a.to_json() for a in self.vec]


@dataclass(frozen=True)
class Index:
    dirs: tuple  # of Direction

    def __post_init__(self):
        dirs = tuple(d if isinstance(d, Direction) else Direction(d) for d in self.dirs)
        object.__setattr__(self, "dirs", dirs)
        if not dirs:
            raise DomainError("an index needs at least one direction")
        n = dirs[0].n
        if any(d.n != n for d in dirs):
            raise DomainError("index directions have different lengths")
        if len(dirs) > n:
            raise DomainError(f"an index in dimension {n} has at most {n} directions")
        for i in range(len(dirs)):
            for j in range(i):
                if not vdot(dirs[i].vec, dirs[j].vec).is_zero():
                    raise DomainError(f"index directions {j} and {i} are not orthogonal")

    @classmethod
    def of(cls, vectors: Iterable[Sequence], field: NumberField | None = None) -> "Index":
        return cls(tuple(Direction(as_vector(v, field)) for v in vectors))

    @property
    def n(self) -> int:
        return self.dirs[0].n

    def __len__(self):
        return len(self.dirs)

    def vectors(self) -> list[Vector]:
        return [d.vec for d in self.dirs]

    def prefix(self, k: int) -> "Index":
        return Index(self.dirs[:k])

    def __str__(self):
        return "[" + ", ".join(str(d) for d in self.dirs) + "]"

    def to_json(self) -> list:
        return [d.to_json() for d in self.dirs]

    @classmethod
    def from_json(cls, data: list, field: NumberField | None = None) -> "Index":
        return cls.of([[FieldElement.from_json(c, field) for c in vec] for vec in data])


@dataclass(frozen=True)
class Part:
    alpha: EpsSeries
    dir: Direction


@dataclass(frozen=True)
class Decomposition:
    parts: tuple  # of Part

    def index(self) -> Index:
        return Index(tuple(p.dir for p in self.parts))

    def reconstruct(self) -> list[EpsSeries]:
        n = self.parts[0].dir.n
        out = [EpsSeries.zero() for _ in range(n)]
        for p in self.parts:
            out = [o + p.alpha.scale(c) for o, c in zip(out, p.dir.vec)]
        return out

    def lines(self) -> list[str]:
        return [f"{p.alpha} : {p.dir}" for p in self.parts]


# --------------------------------------------------------------------------
# decomposition


def _lift_point(x: Sequence) -> list[EpsSeries]:
    return [EpsSeries.lift(c) for c in x]


def orthogonal_decomposition(x: Sequence) -> Decomposition:
    """Peel off leading coefficient vectors.

    At each round the lowest exponent q present in the residual gives the
    coefficient vector c; the direction is canonical(c) and the residual is
    projected onto its orthogonal complement.  The residual's lowest exponent
    strictly increases and stays orthogonal to earlier directions, so there
    are at most n rounds.
    """
    r = _lift_point(x)
    n = len(r)
    if all(c.is_zero() for c in r):
        raise DomainError("the zero point has no index")
    parts = []
    while any(not c.is_zero() for c in r):
        if len(parts) >= n:
            raise InvariantError("decomposition did not terminate within n rounds")
        q = min(c.leading_exponent() for c in r if not c.is_zero())
        coeffs = [c.coefficient(q) for c in r]
        d = Direction(tuple(coeffs))
        inv = d.norm2().inverse()
        proj = None
        for ri, di in zip(r, d.vec):
            term = ri.scale(di)
            proj = term if proj is None else proj + term
        alpha = proj.scale(inv)
        r = [ri - alpha.scale(di) for ri, di in zip(r, d.vec)]
        if any(not c.is_zero() and c.leading_exponent() <= q for c in r):
            raise InvariantError("residual exponent did not increase")
        parts.append(Part(alpha, d))
    return Decomposition(tuple(parts))


def index_of(x: Sequence) -> Index:
    return orthogonal_decomposition(x).index()


def canonical_point(v: Index) -> list[EpsSeries]:
    """v₁ + εv₂ + ⋯ + ε^{k−1}v_k."""
    out = [EpsSeries.zero() for _ in range(v.n)]
    for i, d in enumerate(v.dirs):
        out = [o + EpsSeries.eps(i).scale(c) for o, c in zip(out, d.vec)]
    return out


# --------------------------------------------------------------------------
# rational subspaces


@dataclass(frozen=True)
class RationalSubspace:
    n: int
    basis: tuple = dc_field(default=())  # rows of the reduced row-echelon form

    @classmethod
    def span(cls, n: int, rows: Iterable[Sequence]) -> "RationalSubspace":
        rows = [[Fraction(a) for a in r] for r in rows]
        red, _ = rref(rows)
        return cls(n, tuple(tuple(r) for r in red))

    @classmethod
    def full(cls, n: int) -> "RationalSubspace":
        return cls.span(n, [[int(i == j) for j in range(n)] for i in range(n)])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence) -> bool:
        """Membership of a field vector (decided on θ-coordinate slices)."""
        slices = _theta_slices(v)
        return all(RationalSubspace.span(self.n, list(self.basis) + [s]).dim == self.dim for s in slices)

    def __le__(self, other: "RationalSubspace") -> bool:
        return RationalSubspace.span(self.n, list(self.basis) + list(other.basis)).dim == other.dim

    def to_json(self) -> list:
        return [[str(a) for a in row] for row in self.basis]

    def __str__(self):
        return "span{" + ", ".join("(" + ", ".join(str(a) for a in r) + ")" for r in self.basis) + "}"


def _theta_slices(v: Sequence[FieldElement]) -> list[list[Fraction]]:
    v = as_vector(v)
    d = max(a.field.degree for a in v)
    return [[a.coords[j] if j < len(a.coords) else Fraction(0) for a in v] for j in range(d)]


def rational_envelope(vectors: Iterable[Sequence], n: int | None = None) -> RationalSubspace:
    """Smallest rational subspace containing the vectors.

    Writing each vector as Σ θ^j s_j with rational s_j, a rational form
    vanishes on the vector iff it vanishes on every slice s_j, so the
    envelope is the ℚ-span of all slices.
    """
    vectors = [as_vector(v) for v in vectors]
    if n is None:
        if not vectors:
            raise DomainError("dimension needed for an empty set")
        n = len(vectors[0])
    rows = []
    for v in vectors:
        rows.extend(_theta_slices(v))
    return RationalSubspace.span(n, rows)


def rational_envelope_via_annihilator(vectors: Iterable[Sequence], n: int) -> RationalSubspace:
    """Same subspace, computed as the common kernel of its rational annihilator."""
    rows = []
    for v in vectors:
        rows.extend(_theta_slices(v))
    if not rows:
        return RationalSubspace(n, ())
    ann = nullspace(rows, n)
    if not ann:
        return RationalSubspace.full(n)
    return RationalSubspace.span(n, nullspace(ann, n))


def orthocomplement(V: RationalSubspace) -> RationalSubspace:
    return RationalSubspace.span(V.n, nullspace(list(V.basis), V.n))


def project_onto(v: Sequence[FieldElement], W: RationalSubspace) -> Vector:
    """Orthogonal projection of a field vector onto a rational subspace."""
    v = as_vector(v)
    fld = vector_field(v)
    if W.dim == 0:
        return tuple(fld.zero() for _ in v)
    B = [[fld(a) for a in row] for row in W.basis]
    gram = [[vdot(bi, bj) for bj in B] for bi in B]
    rhs = [vdot(bi, v) for bi in B]
    coef = solve(gram, rhs)
    out = [fld.zero()] * len(v)
    for c, b in zip(coef, B):
        out = [o + c * x for o, x in zip(out, b)]
    return tuple(out)


# --------------------------------------------------------------------------
# Z-reduction


def reduction_steps(v: Index) -> list[Vector]:
    """The vectors w₁..w_k (zeros kept) of the reduction process."""
    ws = [v.dirs[0].vec]
    for d in v.dirs[1:]:
        W = orthocomplement(rational_envelope(ws, v.n))
        ws.append(project_onto(d.vec, W))
    return ws


def reduce(v: Index) -> Index:
    ws = reduction_steps(v)
    return Index(tuple(Direction(w) for w in ws if any(not a.is_zero() for a in w)))


def is_z_reduced(v: Index) -> bool:
    for i in range(1, len(v.dirs)):
        W = orthocomplement(rational_envelope(v.vectors()[:i], v.n))
        if not W.contains(v.dirs[i].vec):
            return False
    return True


def truncation_leq(u: Index, v: Index) -> bool:
    return len(u.dirs) <= len(v.dirs) and v.dirs[: len(u.dirs)] == u.dirs


def extend_index(v: Index, u: Index) -> Index:
    """An index w with v ≤ w and reduce(w) = u, given u Z-reduced and
    reduce(v) ≤ u: append the tail of u after the part matched by red(v)."""
    if not is_z_reduced(u):
        raise PreconditionError("target index is not Z-reduced")
    rv = reduce(v)
    if not truncation_leq(rv, u):
        raise PreconditionError("reduce(v) is not a truncation of u")
    return Index(v.dirs + u.dirs[len(rv) :])


# --------------------------------------------------------------------------
# specialization


def riesz_specializes(x: Sequence, y: Sequence) -> bool:
    return truncation_leq(index_of(x), index_of(y))


def lgroup_specializes(x: Sequence, y: Sequence) -> bool:
    return truncation_leq(reduce(index_of(x)), reduce(index_of(y)))


def specializes(x: Sequence, y: Sequence, dialect: "Dialect | str") -> bool:
    if Dialect.parse(dialect) == Dialect.RIESZ:
        return riesz_specializes(x, y)
    return lgroup_specializes(x, y)


def sign_at_index(f: LinearForm | Sequence, v: Index, dialect: "Dialect | str" = Dialect.RIESZ) -> int:
    """Sign of f at any point with index v: the first nonzero f(vᵢ) decides."""
    f = f if isinstance(f, LinearForm) else LinearForm.of(f)
    if Dialect.parse(dialect) == Dialect.LGROUP and not f.is_integer():
        raise DialectError("l-group forms must have integer coefficients")
    for d in v.dirs:
        s = vdot(f.coeffs, d.vec).sign()
        if s:
            return s
    return 0


def _first_difference(u: Index, v: Index) -> int | None:
    for i, (a, b) in enumerate(zip(u.dirs, v.dirs)):
        if a != b:
            return i
    return None


def _real_witness(ix: Index, iy: Index) -> tuple[Vector, int, Vector | None, Vector]:
    """Field form f with f(x) < 0 ≤ f(y) for points with indexes ix, iy.

    Returns (f, i, w, v): i is the position deciding the signs, w the
    direction of y there (None when ι(y) is a strict prefix) and v that of x.
    """
    i = _first_difference(ix, iy)
    if i is None:
        if len(iy) < len(ix):
            i = len(iy)
            v = ix.dirs[i].vec
            return tuple(-a for a in v), i, None, v
        raise PreconditionError("x specializes to y; no separating form exists")
    v, w = ix.dirs[i].vec, iy.dirs[i].vec
    vv, ww, wv = vdot(v, v), vdot(w, w), vdot(w, v)
    if (wv * wv - vv * ww).is_zero():
        # antiparallel directions
        return w, i, w, v
    f = tuple(vv * a - wv * b + wv * a - ww * b for a, b in zip(w, v))
    return f, i, w, v


def _rational_basis_coords(V: RationalSubspace, y: Vector) -> list[FieldElement]:
    fld = vector_field(y)
    B = [[fld(a) for a in row] for row in V.basis]
    gram = [[vdot(bi, bj) for bj in B] for bi in B]
    rhs = [vdot(bi, y) for bi in B]
    return solve(gram, rhs)


def _round_into(V: RationalSubspace, y: Vector, bound2: FieldElement) -> list[Fraction]:
    """Rational z ∈ V with |z − y|² < bound2 (y ∈ V assumed)."""
    coef = _rational_basis_coords(V, y)
    m = 1
    while True:
        delta = Fraction(1, 2**m)
        z = [Fraction(0)] * V.n
        for c, row in zip(coef, V.basis):
            a = c.approx(delta)
            z = [zi + a * b for zi, b in zip(z, row)]
        diff = vsub(as_vector(z, vector_field(y)), y)
        if (vdot(diff, diff) - bound2).sign() < 0:
            return z
        m += 1
        if m > 400:
            raise InvariantError("rational rounding did not converge")


def separating_form_for_indexes(ix: Index, iy: Index, dialect: "Dialect | str") -> LinearForm:
    """Form f with sign_at_index(f, ix) < 0 ≤ sign_at_index(f, iy).

    For ℓ-groups ix, iy are replaced by their reductions and the real
    witness is rounded to a rational vector of the relevant rational
    orthocomplement, then scaled to integers.
    """
    dialect = Dialect.parse(dialect)
    if dialect == Dialect.RIESZ:
        f, *_ = _real_witness(ix, iy)
        return LinearForm(f)
    rx, ry = reduce(ix), reduce(iy)
    f, i, w, v = _real_witness(rx, ry)
    Vperp = orthocomplement(rational_envelope(rx.vectors()[:i], rx.n)) if i else RationalSubspace.full(rx.n)
    # squared radius below min(f(u)²/|u|², f(w)²/|w|²)
    fv = vdot(f, v)
    bound2 = fv * fv / vdot(v, v)
    if w is not None:
        fw = vdot(f, w)
        b2 = fw * fw / vdot(w, w)
        if b2 < bound2:
            bound2 = b2
    z = _round_into(Vperp, f, bound2)
    g = LinearForm.of(clear_denominators(z))
    return g


def separating_form(x: Sequence, y: Sequence, dialect: "Dialect | str") -> LinearForm:
    if specializes(x, y, dialect):
        raise PreconditionError("x lies in the closure of y; no separating form exists")
    form = separating_form_for_indexes(index_of(x), index_of(y), dialect)
    if not (sign_at_index(form, index_of(x)) < 0 <= sign_at_index(form, index_of(y))):
        raise InvariantError("separating form violates its sign contract")
    return form


# --------------------------------------------------------------------------
# helpers for building indexes


def gram_schmidt(vectors: Iterable[Sequence]) -> list[Vector]:
    """Exact orthogonalization without normalization; zero results dropped."""
    out: list[Vector] = []
    for v in vectors:
        v = as_vector(v)
        for u in out:
            v = vsub(v, vscale(vdot(v, u) / vdot(u, u), u))
        if any(not a.is_zero() for a in v):
            out.append(v)
    return out


def index_from_vectors(vectors: Iterable[Sequence]) -> Index:
    return Index(tuple(Direction(v) for v in gram_schmidt(vectors)))


# --------------------------------------------------------------------------
# text form


def _parse_vector(ts: TokenStream, field: NumberField) -> list[FieldElement]:
    ts.expect("(")
    out = [parse_field_expr(ts, field)]
    while ts.accept(","):
        out.append(parse_field_expr(ts, field))
    ts.expect(")")
    return out


def parse_index(text: str, n: int | None = None, field: NumberField | None = None) -> Index:
    """Parse ``[(1,0)],[(0,1)]`` or ``[(1,th,0), (0,0,1)]`` (directions in order)."""
    fld = field or RATIONALS
    ts = TokenStream(text)
    vecs = []
    while True:
        if ts.accept("["):
            vecs.append(_parse_vector(ts, fld))
            while ts.accept(","):
                vecs.append(_parse_vector(ts, fld))
            ts.expect("]")
        else:
            vecs.append(_parse_vector(ts, fld))
        if not ts.accept(","):
            break
    ts.expect_end()
    if n is not None and any(len(v) != n for v in vecs):
        raise ArityError(f"index vectors must have {n} coordinates")
    return Index.of(vecs)


def render_index(v: Index) -> str:
    return ",".join("[(" + ", ".join(str(c) for c in d.vec) + ")]" for d in v.dirs)
