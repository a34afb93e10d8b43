"""Exact coefficients: ℚ and real number fields ℚ(θ) given by a monic
integer minimal polynomial and an isolating interval for the real root θ.

Signs are decided by bisecting the isolating interval with rational
endpoints and evaluating the element on the enclosure in interval
arithmetic.  No floating point is involved.
"""

from __future__ import annotations

import json
import logging
from fractions import Fraction
from functools import total_ordering
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

from ._lexer import ExprParser, TokenStream, integer_exponent, parse_signed_rational
from .errors import DomainError, FieldMismatchError, ParseError

log = logging.getLogger(__name__)

Rational = Fraction

# --------------------------------------------------------------------------
# univariate polynomials over ℚ, coefficient lists low → high


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _padd(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def _pneg(a):
    return [-c for c in a]


def _pmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _pdivmod(a, b):
    a = [Fraction(c) for c in _trim(a)]
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = Fraction(b[-1])
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, y in enumerate(b):
            a[i + shift] -= c * y
        a = _trim(a)
    return _trim(q), a


def _peval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _pderiv(p):
    return _trim([i * c for i, c in enumerate(p)][1:])


def _sturm_chain(p):
    chain = [_trim([Fraction(c) for c in p]), _pderiv([Fraction(c) for c in p])]
    while chain[-1]:
        _, r = _pdivmod(chain[-2], chain[-1])
        chain.append(_pneg(r))
    return chain[:-1]


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _sign_changes(values):
    signs = [_sign(v) for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(poly: Sequence[int], lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in the half-open interval (lo, hi]."""
    chain = _sturm_chain(poly)
    return _sign_changes([_peval(q, lo) for q in chain]) - _sign_changes(
        [_peval(q, hi) for q in chain]
    )


def _rational_roots(poly: Sequence[int]) -> list[Fraction]:
    # monic integer polynomial: rational roots are integers dividing the constant term
    p = list(poly)
    if p and p[0] == 0:
        return [Fraction(0)]
    c0 = abs(p[0])
    roots = []
    for d in range(1, c0 + 1):
        if c0 % d == 0:
            for cand in (d, -d):
                if _peval(p, Fraction(cand)) == 0:
                    roots.append(Fraction(cand))
    return roots


def _ival_mul(a, b):
    prods = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(prods), max(prods)


def _ival_horner(coords, enc):
    lo = hi = coords[-1]
    for c in reversed(coords[:-1]):
        lo, hi = _ival_mul((lo, hi), enc)
        lo, hi = lo + c, hi + c
    return lo, hi


# --------------------------------------------------------------------------


class NumberField:
    """ℚ(θ) for the real root θ of ``poly`` lying in ``(lo, hi)``.

    ``poly`` lists integer coefficients low → high and must be monic.
    Degree-1 fields are ℚ itself.  Irreducibility is verified exactly up to
    degree 3 (no rational root); for degree ≥ 4 only the rational-root test
    runs and irreducibility is a trust assumption.
    """

    def __init__(self, poly: Sequence[int], lo, hi, name: str | None = None):
        poly = tuple(int(c) for c in poly)
        while poly and poly[-1] == 0:
            poly = poly[:-1]
        if len(poly) < 2:
            raise DomainError("minimal polynomial must have degree >= 1")
        if poly[-1] != 1:
            raise DomainError("minimal polynomial must be monic")
        lo, hi = Fraction(lo), Fraction(hi)
        if not lo < hi:
            raise DomainError("isolating interval needs lo < hi")
        if _peval(poly, lo) == 0 or _peval(poly, hi) == 0:
            raise DomainError("isolating interval endpoints must not be roots")
        if count_real_roots(poly, lo, hi) != 1:
            raise DomainError("isolating interval must contain exactly one real root")
        self.poly = poly
        self.degree = len(poly) - 1
        self.lo = lo
        self.hi = hi
        self.name = name
        if self.degree > 1:
            if _rational_roots(poly):
                raise DomainError("minimal polynomial has a rational root")
            if self.degree > 3:
                log.debug("irreducibility of degree-%d polynomial assumed", self.degree)
        # refined enclosure of θ; shrinks monotonically, never affects equality
        self._enc = (lo, hi)
        self._sign_lo = _sign(_peval(poly, lo))

    # identity is the declared (poly, lo, hi); refinements do not matter
    def _key(self):
        return (self.poly, self.lo, self.hi)

    def __eq__(self, other):
        return isinstance(other, NumberField) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"NumberField({self.poly_text()}, [{self.lo}, {self.hi}])"

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    def poly_text(self) -> str:
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.poly[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            mag = abs(c)
            body = str(mag) if k == 0 else (mono if mag == 1 else f"{mag}*{mono}")
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f"{sign}{body}"
        return text

    def to_text(self) -> str:
        return f"field({self.poly_text()}, [{self.lo}, {self.hi}])"

    def to_json(self) -> dict:
        return {"poly": list(self.poly), "lo": str(self.lo), "hi": str(self.hi)}

    @classmethod
    def from_json(cls, data: dict, name: str | None = None) -> "NumberField":
        return cls(data["poly"], Fraction(data["lo"]), Fraction(data["hi"]), name=name or data.get("name"))

    # -- elements ---------------------------------------------------------

    def zero(self) -> "FieldElement":
        return FieldElement(self, (Fraction(0),) * self.degree)

    def one(self) -> "FieldElement":
        return FieldElement(self, (Fraction(1),) + (Fraction(0),) * (self.degree - 1))

    def gen(self) -> "FieldElement":
        """θ.  In ℚ (degree 1) this is the rational root itself."""
        if self.degree == 1:
            return self(-Fraction(self.poly[0]))
        return FieldElement(self, tuple(Fraction(int(i == 1)) for i in range(self.degree)))

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            return value.coerce_to(self)
        if isinstance(value, (int, _RationalABC)) and not isinstance(value, bool):
            return FieldElement(self, (Fraction(value),) + (Fraction(0),) * (self.degree - 1))
        if isinstance(value, str):
            return self.parse(value)
        raise TypeError(f"cannot convert {value!r} into {self!r}")

    def element(self, coords: Iterable) -> "FieldElement":
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) > self.degree:
            # reduce a longer polynomial modulo the minimal polynomial
            _, r = _pdivmod(list(coords), [Fraction(c) for c in self.poly])
            coords = tuple(r)
        coords = coords + (Fraction(0),) * (self.degree - len(coords))
        return FieldElement(self, coords)

    def parse(self, text: str) -> "FieldElement":
        """Parse ``1+2*th``-style text (rationals and powers of ``th``)."""
        ts = TokenStream(text)
        return parse_field_expr(ts, self, end=True)

    # -- root enclosure ---------------------------------------------------

    def _refine(self):
        lo, hi = self._enc
        mid = (lo + hi) / 2
        s = _sign(_peval(self.poly, mid))
        if s == 0:  # only possible in degree 1
            self._enc = (mid, mid)
        elif s == self._sign_lo:
            self._enc = (mid, hi)
        else:
            self._enc = (lo, mid)

    def enclosure(self, width=None) -> tuple[Fraction, Fraction]:
        """Rational interval containing θ, refined below ``width`` if given."""
        if width is not None:
            width = Fraction(width)
            while self._enc[1] - self._enc[0] > width:
                self._refine()
        return self._enc


RATIONALS = NumberField((0, 1), -1, 1, name="q")


def _common_field(a: "FieldElement", b: "FieldElement") -> NumberField:
    if a.field == b.field:
        return a.field
    # ℚ embeds in every field
    if a.field.is_rational and a.field == RATIONALS:
        return b.field
    if b.field.is_rational and b.field == RATIONALS:
        return a.field
    raise FieldMismatchError(f"mismatched fields {a.field!r} and {b.field!r}")


@total_ordering
class FieldElement:
    """Σ coords[i]·θ^i in a :class:`NumberField`.  Immutable."""

    __slots__ = ("field", "coords", "_hash")

    def __init__(self, field: NumberField, coords: tuple):
        self.field = field
        self.coords = coords
        self._hash = None

    # -- conversion -------------------------------------------------------

    def coerce_to(self, field: NumberField) -> "FieldElement":
        if field == self.field:
            return self
        if self.field == RATIONALS:
            # ℚ embeds into every field
            return field(self.coords[0])
        raise FieldMismatchError(f"cannot move {self} from {self.field!r} into {field!r}")

    def _lift(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, (int, _RationalABC)) and not isinstance(other, bool):
            return self.field(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def is_integer(self) -> bool:
        return self.is_rational() and self.to_fraction().denominator == 1

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise DomainError(f"{self} is not rational")
        return self.coords[0]

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        f = _common_field(self, other)
        a, b = self.coerce_to(f), other.coerce_to(f)
        return FieldElement(f, tuple(x + y for x, y in zip(a.coords, b.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-x for x in self.coords))

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, _RationalABC)) and not isinstance(other, bool):
            c = Fraction(other)
            return FieldElement(self.field, tuple(x * c for x in self.coords))
        if not isinstance(other, FieldElement):
            return NotImplemented
        f = _common_field(self, other)
        a, b = self.coerce_to(f), other.coerce_to(f)
        if f.degree == 1:
            return FieldElement(f, (a.coords[0] * b.coords[0],))
        prod = _pmul(_trim(a.coords), _trim(b.coords))
        return f.element(_reduce_mod(prod, f.poly))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inversion of zero field element")
        f = self.field
        if f.degree == 1 or self.is_rational():
            c = 1 / self.coords[0]
            return FieldElement(f, (c,) + self.coords[1:])
        # extended Euclid: s·a + t·m = 1 since m is irreducible
        r0, r1 = [Fraction(c) for c in f.poly], _trim(self.coords)
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _padd(s0, _pneg(_pmul(q, s1)))
            if not r1:
                raise DomainError("minimal polynomial is reducible: zero divisor found")
        # r1 is a nonzero constant
        inv = _pmul(s1, [1 / r1[0]])
        return f.element(_reduce_mod(inv, f.poly))

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        acc = self.field.one()
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- order ------------------------------------------------------------

    def sign(self) -> int:
        """Sign of the real number, decided exactly."""
        coords = self.coords
        if not any(coords[1:]):
            return _sign(coords[0])
        f = self.field
        while True:
            lo, hi = _ival_horner(list(coords), f._enc)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            f._refine()

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        try:
            f = _common_field(self, other)
        except FieldMismatchError:
            return False
        return self.coerce_to(f).coords == other.coerce_to(f).coords

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.coords[0])
            else:
                self._hash = hash((self.field, self.coords))
        return self._hash

    def __lt__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).sign() < 0

    def __bool__(self):
        return not self.is_zero()

    # -- numerics & text ---------------------------------------------------

    def approx(self, tol) -> Fraction:
        """Rational q with |self − q| ≤ tol."""
        tol = Fraction(tol)
        if self.is_rational():
            return self.coords[0]
        f = self.field
        while True:
            lo, hi = _ival_horner(list(self.coords), f._enc)
            if hi - lo <= 2 * tol:
                return (lo + hi) / 2
            f._refine()

    def __float__(self):
        return float(self.approx(Fraction(1, 2**60)))

    def __str__(self):
        return _render_coords(self.coords)

    def __repr__(self):
        if self.field == RATIONALS:
            return f"FieldElement({self})"
        return f"FieldElement({self} @ {self.field.to_text()})"

    def to_text(self) -> str:
        return f"{self} @ {self.field.to_text()}"

    def to_json(self) -> dict:
        return {"coords": [str(c) for c in self.coords], "field": self.field.to_json()}

    @classmethod
    def from_json(cls, data: dict, field: NumberField | None = None) -> "FieldElement":
        declared = NumberField.from_json(data["field"]) if "field" in data else None
        if field is None:
            field = declared or RATIONALS
        elif declared is not None and declared != field:
            raise FieldMismatchError(f"element declared in {declared!r}, expected {field!r}")
        return field.element(Fraction(c) for c in data["coords"])


def _reduce_mod(p, modulus):
    _, r = _pdivmod(p, [Fraction(c) for c in modulus])
    return r


def _render_coords(coords) -> str:
    terms = []
    for k, c in enumerate(coords):
        if c == 0:
            continue
        mono = "" if k == 0 else ("th" if k == 1 else f"th^{k}")
        mag = abs(c)
        if k == 0:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    text = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        text += f"{sign}{body}"
    return text


# --------------------------------------------------------------------------
# text formats


def parse_field_expr(ts: TokenStream, field: NumberField, end: bool = False) -> FieldElement:
    def th(q):
        if field.degree == 1:
            raise ValueError("the rational field has no generator 'th'")
        return field.gen() ** integer_exponent(q)

    parser = ExprParser(ts, field, {"th": th})
    return parser.parse() if end else parser.expr()


class _QPoly:
    """Throwaway polynomial value for parsing minimal polynomials."""

    def __init__(self, coeffs):
        self.c = _trim(coeffs)

    def __add__(self, o):
        return _QPoly(_padd(self.c, o.c))

    def __sub__(self, o):
        return _QPoly(_padd(self.c, _pneg(o.c)))

    def __neg__(self):
        return _QPoly(_pneg(self.c))

    def __mul__(self, o):
        return _QPoly(_pmul(self.c, o.c))


def parse_poly(ts: TokenStream) -> list[int]:
    def x(q):
        return _QPoly([Fraction(0)] * integer_exponent(q) + [Fraction(1)])

    value = ExprParser(ts, lambda r: _QPoly([r]), {"x": x}).expr()
    coeffs = value.c
    if any(c.denominator != 1 for c in coeffs):
        raise ParseError("minimal polynomial must have integer coefficients", None, ts.text)
    return [int(c) for c in coeffs]


def parse_field_spec(ts: TokenStream) -> NumberField:
    tok = ts.peek()
    if tok.value != "field":
        ts.error("expected 'field('")
    ts.next()
    ts.expect("(")
    poly = parse_poly(ts)
    ts.expect(",")
    ts.expect("[")
    lo = parse_signed_rational(ts)
    ts.expect(",")
    hi = parse_signed_rational(ts)
    ts.expect("]")
    ts.expect(")")
    try:
        return NumberField(poly, lo, hi)
    except DomainError as exc:
        raise ParseError(str(exc), tok.pos, ts.text) from exc


def parse_element(text: str, field: NumberField | None = None) -> FieldElement:
    """Parse ``<expr>`` or ``<expr> @ field(<poly>, [lo, hi])``."""
    if "@" in text:
        expr_text, _, spec_text = text.partition("@")
        ts = TokenStream(spec_text)
        declared = parse_field_spec(ts)
        ts.expect_end()
        if field is not None and declared != field:
            raise FieldMismatchError(f"element declared in {declared!r}, expected {field!r}")
        field = declared
    else:
        expr_text = text
    return (field or RATIONALS).parse(expr_text)


def dumps_element(a: FieldElement) -> str:
    return json.dumps(a.to_json())


# -- spec-named operations -------------------------------------------------


def fe_arith(op: str, a: FieldElement, b: FieldElement | None = None) -> FieldElement:
    if op == "inv":
        return a.inverse()
    if b is None:
        raise TypeError(f"{op} needs two operands")
    if a.field != b.field:
        raise FieldMismatchError(f"mismatched fields {a.field!r} and {b.field!r}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def fe_sign(a: FieldElement) -> int:
    return a.sign()


def fe_cmp(a: FieldElement, b: FieldElement) -> int:
    if a.field != b.field:
        raise FieldMismatchError(f"mismatched fields {a.field!r} and {b.field!r}")
    return (a - b).sign()


# -- presets ----------------------------------------------------------------

SQRT2 = NumberField((-2, 0, 1), Fraction(7, 5), Fraction(3, 2), name="sqrt2")
SQRT2_SQRT3 = NumberField((1, 0, -10, 0, 1), Fraction(3), Fraction(7, 2), name="sqrt2sqrt3")


def sqrt2_in(field: NumberField) -> FieldElement:
    """√2 expressed in one of the shipped presets."""
    if field == SQRT2:
        return field.gen()
    if field == SQRT2_SQRT3:
        th = field.gen()
        return (th**3 - 9 * th) / 2
    raise DomainError(f"no known expression of sqrt(2) in {field!r}")


def sqrt3_in(field: NumberField) -> FieldElement:
    if field == SQRT2_SQRT3:
        th = field.gen()
        return (11 * th - th**3) / 2
    raise DomainError(f"no known expression of sqrt(3) in {field!r}")
