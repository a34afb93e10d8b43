"""Finite ε-series Σ c_q ε^q with rational exponents and exact coefficients.

ε is a positive infinitesimal, so a nonzero series has the sign of its
lowest-exponent coefficient.  This is the concrete non-Archimedean model
used everywhere a hyperreal is needed.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from functools import total_ordering
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

from ._lexer import ExprParser, TokenStream
from .coeff import RATIONALS, FieldElement, NumberField
from .errors import DomainError, FieldMismatchError


class Kind(str, enum.Enum):
    ZERO = "zero"
    INFINITESIMAL = "infinitesimal"
    LIMITED = "limited_noninfinitesimal"
    UNLIMITED = "unlimited"


def _join_fields(a: NumberField, b: NumberField) -> NumberField:
    if a == b:
        return a
    if a == RATIONALS:
        return b
    if b == RATIONALS:
        return a
    raise FieldMismatchError(f"mismatched fields {a!r} and {b!r}")


@total_ordering
class EpsSeries:
    """Immutable canonical ε-series.

    ``terms`` is a tuple of ``(exponent, coefficient)`` pairs with strictly
    increasing exponents and nonzero coefficients.
    """

    __slots__ = ("field", "terms", "_hash")

    def __init__(self, terms: Iterable[tuple] = (), field: NumberField | None = None):
        acc: dict[Fraction, FieldElement] = {}
        fld = field or RATIONALS
        for q, c in terms:
            q = Fraction(q)
            if not isinstance(c, FieldElement):
                c = fld(c)
            fld = _join_fields(fld, c.field)
            acc[q] = acc[q] + c if q in acc else c
        self.field = fld
        self.terms = tuple(
            (q, c.coerce_to(fld)) for q, c in sorted(acc.items()) if not c.is_zero()
        )
        self._hash = None

    @classmethod
    def _raw(cls, terms: tuple, field: NumberField) -> "EpsSeries":
        obj = cls.__new__(cls)
        obj.field = field
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c, field: NumberField | None = None) -> "EpsSeries":
        return cls([(0, c)], field)

    @classmethod
    def eps(cls, q=1, field: NumberField | None = None) -> "EpsSeries":
        return cls([(q, 1)], field)

    @classmethod
    def zero(cls, field: NumberField | None = None) -> "EpsSeries":
        return cls((), field)

    # -- coercion --------------------------------------------------------

    @staticmethod
    def lift(x, field: NumberField | None = None) -> "EpsSeries":
        if isinstance(x, EpsSeries):
            return x
        if isinstance(x, FieldElement):
            return EpsSeries.const(x)
        if isinstance(x, (int, _RationalABC)) and not isinstance(x, bool):
            return EpsSeries.const(Fraction(x), field)
        raise TypeError(f"cannot interpret {x!r} as an ε-series")

    def _other(self, other):
        if isinstance(other, EpsSeries):
            return other
        if isinstance(other, (FieldElement, int, _RationalABC)) and not isinstance(other, bool):
            return EpsSeries.lift(other, self.field)
        return NotImplemented

    def coerce_to(self, field: NumberField) -> "EpsSeries":
        if field == self.field:
            return self
        return EpsSeries._raw(tuple((q, c.coerce_to(field)) for q, c in self.terms), field)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        fld = _join_fields(self.field, other.field)
        return EpsSeries(self.terms + other.terms, fld)

    __radd__ = __add__

    def __neg__(self):
        return EpsSeries._raw(tuple((q, -c) for q, c in self.terms), self.field)

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (FieldElement, int, _RationalABC)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, EpsSeries):
            return NotImplemented
        fld = _join_fields(self.field, other.field)
        prods = [(qa + qb, ca * cb) for qa, ca in self.terms for qb, cb in other.terms]
        return EpsSeries(prods, fld)

    __rmul__ = __mul__

    def scale(self, c) -> "EpsSeries":
        if isinstance(c, FieldElement):
            fld = _join_fields(self.field, c.field)
            if c.is_zero():
                return EpsSeries.zero(fld)
            return EpsSeries._raw(tuple((q, (a * c).coerce_to(fld)) for q, a in self.terms), fld)
        c = Fraction(c)
        if c == 0:
            return EpsSeries.zero(self.field)
        return EpsSeries._raw(tuple((q, a * c) for q, a in self.terms), self.field)

    def shift(self, q) -> "EpsSeries":
        """Multiply by ε^q."""
        q = Fraction(q)
        return EpsSeries._raw(tuple((p + q, c) for p, c in self.terms), self.field)

    def div(self, other: "EpsSeries", bound) -> "EpsSeries":
        """Approximate quotient self/other, exact in all exponents ≤ ``bound``.

        Long division on leading terms; the remainder is dropped once the
        next quotient exponent would exceed ``bound``.
        """
        other = self._other(other)
        if not other.terms:
            raise ZeroDivisionError("division by the zero series")
        bound = Fraction(bound)
        q0, c0 = other.terms[0]
        inv = c0.inverse()
        rem = self
        out = []
        while rem.terms:
            q, c = rem.terms[0]
            e = q - q0
            if e > bound:
                break
            coef = c * inv
            out.append((e, coef))
            rem = rem - other.scale(coef).shift(e)
        return EpsSeries(out, _join_fields(self.field, other.field))

    # -- order ---------------------------------------------------------------

    def sign(self) -> int:
        return self.terms[0][1].sign() if self.terms else 0

    def cmp(self, other) -> int:
        return (self - other).sign()

    def __eq__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return NotImplemented
        if len(self.terms) != len(other.terms):
            return False
        return all(qa == qb and ca == cb for (qa, ca), (qb, cb) in zip(self.terms, other.terms))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def __lt__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return NotImplemented
        return self.cmp(other) < 0

    def __bool__(self):
        return bool(self.terms)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- structure -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_real(self) -> bool:
        """True for constant series (standard reals)."""
        return all(q == 0 for q, _ in self.terms)

    def leading(self) -> tuple[Fraction, FieldElement]:
        if not self.terms:
            raise DomainError("the zero series has no leading term")
        return self.terms[0]

    def leading_exponent(self) -> Fraction:
        return self.leading()[0]

    def coefficient(self, q) -> FieldElement:
        q = Fraction(q)
        for p, c in self.terms:
            if p == q:
                return c
        return self.field.zero()

    def classify(self) -> Kind:
        if not self.terms:
            return Kind.ZERO
        q = self.terms[0][0]
        if q > 0:
            return Kind.INFINITESIMAL
        if q == 0:
            return Kind.LIMITED
        return Kind.UNLIMITED

    def is_limited(self) -> bool:
        return self.classify() != Kind.UNLIMITED

    def st(self) -> FieldElement:
        if not self.is_limited():
            raise DomainError(f"standard part of unlimited element {self}")
        return self.coefficient(0)

    def exponents(self) -> list[Fraction]:
        return [q for q, _ in self.terms]

    # -- text & json ---------------------------------------------------------

    def __str__(self):
        return render_series(self)

    def __repr__(self):
        return f"EpsSeries({self})"

    def to_json(self) -> list:
        return [{"q": str(q), "c": c.to_json()} for q, c in self.terms]

    @classmethod
    def from_json(cls, data: Sequence[dict], field: NumberField | None = None) -> "EpsSeries":
        terms = [(Fraction(d["q"]), FieldElement.from_json(d["c"], field)) for d in data]
        return cls(terms, field)


def _render_exp(q: Fraction) -> str:
    if q == 1:
        return "e"
    if q.denominator == 1:
        return f"e^{q}"
    return f"e^({q})"


def render_series(a: EpsSeries) -> str:
    if not a.terms:
        return "0"
    parts = []
    for q, c in a.terms:
        if c.is_rational():
            v = c.coords[0]
            neg, mag = v < 0, abs(v)
            if q == 0:
                body = str(mag)
            elif mag == 1:
                body = _render_exp(q)
            else:
                body = f"{mag}*{_render_exp(q)}"
        else:
            neg = False
            body = f"({c})"
            if q != 0:
                body += f"*{_render_exp(q)}"
        parts.append((neg, body))
    text = ("-" if parts[0][0] else "") + parts[0][1]
    for neg, body in parts[1:]:
        text += (" - " if neg else " + ") + body
    return text


def parse_series_expr(ts: TokenStream, field: NumberField | None = None) -> EpsSeries:
    fld = field or RATIONALS

    def th(q):
        if fld.degree == 1:
            raise ValueError("the rational field has no generator 'th'")
        if q.denominator != 1 or q < 0:
            raise ValueError(f"powers of th must be non-negative integers, got {q}")
        return EpsSeries.const(fld.gen() ** int(q))

    def e(q):
        return EpsSeries.eps(q, fld)

    return ExprParser(ts, lambda r: EpsSeries.const(r, fld), {"e": e, "th": th}).expr()


def parse_series(text: str, field: NumberField | None = None) -> EpsSeries:
    """Parse text such as ``3 + 5*e + (1+th)*e^2 - e^-1``."""
    ts = TokenStream(text)
    value = parse_series_expr(ts, field)
    ts.expect_end()
    return value.coerce_to(_join_fields(value.field, field or RATIONALS))


def parse_point(text: str, n: int | None = None, field: NumberField | None = None) -> list[EpsSeries]:
    """Parse a tuple ``(s_0, ..., s_{n-1})`` of series."""
    from .errors import ArityError

    ts = TokenStream(text)
    ts.expect("(")
    coords = [parse_series_expr(ts, field)]
    while ts.accept(","):
        coords.append(parse_series_expr(ts, field))
    ts.expect(")")
    ts.expect_end()
    if n is not None and len(coords) != n:
        raise ArityError(f"point has {len(coords)} coordinates, expected {n}")
    return coords


# -- spec-named operations --------------------------------------------------


def _check_fields(a: EpsSeries, b: EpsSeries):
    _join_fields(a.field, b.field)


def es_add(a: EpsSeries, b: EpsSeries) -> EpsSeries:
    _check_fields(a, b)
    return a + b


def es_mul(a: EpsSeries, b: EpsSeries) -> EpsSeries:
    _check_fields(a, b)
    return a * b


def es_scale(c, a: EpsSeries) -> EpsSeries:
    return a.scale(c)


def es_neg(a: EpsSeries) -> EpsSeries:
    return -a


def es_cmp(a: EpsSeries, b: EpsSeries) -> int:
    return a.cmp(b)


def es_st(a: EpsSeries) -> FieldElement:
    return a.st()


def es_classify(a: EpsSeries) -> Kind:
    return a.classify()


def es_leading(a: EpsSeries) -> tuple[Fraction, FieldElement]:
    return a.leading()


def real_point(coords: Sequence, field: NumberField | None = None) -> list[EpsSeries]:
    """Embed a real vector as constant series."""
    return [EpsSeries.lift(c, field) for c in coords]


def st_point(x: Sequence[EpsSeries]) -> list[FieldElement]:
    return [c.st() for c in x]


def point_field(x: Sequence[EpsSeries]) -> NumberField:
    fld = RATIONALS
    for c in x:
        fld = _join_fields(fld, c.field)
    return fld


__all__ = [
    "EpsSeries",
    "Kind",
    "es_add",
    "es_mul",
    "es_scale",
    "es_neg",
    "es_cmp",
    "es_st",
    "es_classify",
    "es_leading",
    "parse_series",
    "parse_point",
    "render_series",
    "real_point",
    "st_point",
    "point_field",
]
