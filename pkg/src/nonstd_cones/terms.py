"""Terms of free ℓ-groups and Riesz spaces: AST, parser, renderer,
evaluators and linear-piece extraction.

A term denotes a continuous piecewise-linear homogeneous function.  The
ℓ-group dialect only admits integer scalars; the Riesz dialect admits any
element of the coefficient field.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence, Union

from ._lexer import TokenStream, parse_rational
from .coeff import RATIONALS, FieldElement, NumberField, parse_field_expr
from .errors import ArityError, DialectError, DomainError, ParseError
from .series import EpsSeries


class Dialect(str, enum.Enum):
    LGROUP = "lgroup"
    RIESZ = "riesz"

    @classmethod
    def parse(cls, text: "str | Dialect") -> "Dialect":
        if isinstance(text, Dialect):
            return text
        key = text.strip().lower().replace("-", "").replace("_", "")
        if key in ("lgroup", "l", "group"):
            return cls.LGROUP
        if key in ("riesz", "r", "vectorlattice"):
            return cls.RIESZ
        raise DomainError(f"unknown dialect {text!r}")


# --------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Var:
    i: int


@dataclass(frozen=True)
class Sum:
    items: tuple  # Sum(()) is the constant 0


@dataclass(frozen=True)
class Neg:
    arg: "Term"


@dataclass(frozen=True)
class IntScale:
    k: int
    arg: "Term"


@dataclass(frozen=True)
class FieldScale:
    c: FieldElement
    arg: "Term"


@dataclass(frozen=True)
class Meet:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Join:
    left: "Term"
    right: "Term"


Term = Union[Var, Sum, Neg, IntScale, FieldScale, Meet, Join]

ZERO = Sum(())


def var(i: int) -> Var:
    return Var(i)


def plus(*ts: Term) -> Term:
    return ts[0] if len(ts) == 1 else Sum(tuple(ts))


def minus(a: Term, b: Term) -> Term:
    return Sum((a, Neg(b)))


def meet(*ts: Term) -> Term:
    """Right-folded binary meet."""
    return reduce(lambda acc, t: Meet(t, acc), reversed(ts[:-1]), ts[-1])


def join(*ts: Term) -> Term:
    return reduce(lambda acc, t: Join(t, acc), reversed(ts[:-1]), ts[-1])


def absval(t: Term) -> Term:
    return Join(t, Neg(t))


def scale(k, t: Term) -> Term:
    if isinstance(k, FieldElement):
        if k.is_integer():
            return IntScale(int(k.to_fraction()), t)
        return FieldScale(k, t)
    k = Fraction(k)
    if k.denominator == 1:
        return IntScale(int(k), t)
    return FieldScale(RATIONALS(k), t)


def _is_abs(t: Term) -> bool:
    return isinstance(t, Join) and isinstance(t.right, Neg) and t.right.arg == t.left


# --------------------------------------------------------------------------
# structural queries


def children(t: Term) -> tuple:
    if isinstance(t, Var):
        return ()
    if isinstance(t, Sum):
        return t.items
    if isinstance(t, (Neg, IntScale, FieldScale)):
        return (t.arg,)
    return (t.left, t.right)


def walk(t: Term) -> Iterable[Term]:
    stack = [t]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(children(node))


def variables(t: Term) -> set[int]:
    return {node.i for node in walk(t) if isinstance(node, Var)}


def size(t: Term) -> int:
    return sum(1 for _ in walk(t))


def term_field(t: Term) -> NumberField:
    fld = RATIONALS
    for node in walk(t):
        if isinstance(node, FieldScale) and node.c.field != RATIONALS:
            if fld != RATIONALS and fld != node.c.field:
                raise DomainError("term mixes scalars from different fields")
            fld = node.c.field
    return fld


def check_term(t: Term, n: int, dialect: Dialect) -> None:
    dialect = Dialect.parse(dialect)
    for node in walk(t):
        if isinstance(node, Var) and not 0 <= node.i < n:
            raise ArityError(f"variable x{node.i} out of range for arity {n}")
        if isinstance(node, FieldScale) and dialect == Dialect.LGROUP:
            raise DialectError(f"field scalar {node.c} in an l-group term")


def is_lgroup_term(t: Term) -> bool:
    return not any(isinstance(node, FieldScale) for node in walk(t))


# --------------------------------------------------------------------------
# parser


class _TermParser:
    def __init__(self, text: str, n: int | None, dialect: Dialect, field: NumberField):
        self.ts = TokenStream(text)
        self.n = n
        self.dialect = dialect
        self.field = field
        self.rational_scalars = False

    def parse(self) -> Term:
        t = self.join()
        self.ts.expect_end()
        return t

    def join(self) -> Term:
        parts = [self.meet()]
        while self.ts.accept("\\/"):
            parts.append(self.meet())
        return join(*parts)

    def meet(self) -> Term:
        parts = [self.sum()]
        while self.ts.accept("/\\"):
            parts.append(self.sum())
        return meet(*parts)

    def sum(self) -> Term:
        items = [self.prod()]
        while self.ts.at("+") or self.ts.at("-"):
            op = self.ts.next().value
            rhs = self.prod()
            items.append(rhs if op == "+" else Neg(rhs))
        return plus(*items)

    def prod(self) -> Term:
        if self.ts.accept("-"):
            return Neg(self.prod())
        c = self.scalar()
        atom = self.atom()
        if c is None:
            return atom
        return self.make_scale(c, atom)

    def make_scale(self, c: FieldElement, atom: Term) -> Term:
        if c.is_integer():
            return IntScale(int(c.to_fraction()), atom)
        if c.is_rational():
            if self.dialect == Dialect.LGROUP:
                self.rational_scalars = True
            return FieldScale(c, atom)
        # only reachable in the Riesz dialect
        return FieldScale(c, atom)

    # scalar := satom ('*' satom)* '*'   (the trailing '*' precedes the atom)
    def scalar(self) -> FieldElement | None:
        ts = self.ts
        start = ts.i
        vals = []
        while True:
            mark = ts.i
            v = self.scalar_atom()
            if v is None:
                ts.i = mark
                break
            if not ts.at("*"):
                ts.i = mark
                break
            ts.next()
            vals.append(v)
        if not vals:
            ts.i = start
            return None
        return reduce(lambda a, b: a * b, vals)

    def scalar_atom(self) -> FieldElement | None:
        ts = self.ts
        tok = ts.peek()
        if tok.kind == "num":
            return self.field(parse_rational(ts))
        if tok.kind == "ident" and tok.value == "th":
            if self.dialect == Dialect.LGROUP:
                raise DialectError(f"field generator 'th' in an l-group term (at position {tok.pos})")
            ts.next()
            k = 1
            if ts.accept("^"):
                num = ts.next()
                if num.kind != "num":
                    ts.error("expected an integer exponent", num)
                k = int(num.value)
            if self.field.degree == 1:
                ts.error("the rational field has no generator 'th'", tok)
            return self.field.gen() ** k
        if tok.value == "(":
            mark = ts.i
            ts.next()
            if self.dialect == Dialect.LGROUP:
                # an l-group scalar in parentheses must be rational
                self._reject_th_until_close(mark)
            try:
                v = parse_field_expr(ts, self.field)
                ts.expect(")")
            except ParseError:
                ts.i = mark
                return None
            return v
        return None

    def _reject_th_until_close(self, mark: int):
        ts = self.ts
        close = ts.matching_paren(mark - ts.i)
        for j in range(mark - ts.i, close):
            tok = ts.peek(j)
            if tok.kind == "ident" and tok.value == "th":
                raise DialectError(f"field generator 'th' in an l-group term (at position {tok.pos})")

    def atom(self) -> Term:
        ts = self.ts
        tok = ts.peek()
        if tok.kind == "ident":
            name = tok.value
            if name == "th":
                if self.dialect == Dialect.LGROUP:
                    raise DialectError(f"field generator 'th' in an l-group term (at position {tok.pos})")
                ts.error("'th' may only appear inside a scalar", tok)
            if name[0] == "x" and name[1:].isdigit():
                ts.next()
                i = int(name[1:])
                if self.n is not None and i >= self.n:
                    raise ArityError(f"variable {name} out of range for arity {self.n} (at position {tok.pos})")
                return Var(i)
            ts.error(f"unknown identifier {name!r}", tok)
        if tok.kind == "num":
            if tok.value.strip("0") == "" and not ts.at("/", 1):
                ts.next()
                return ZERO
            ts.error("a constant must multiply a term: write c*term", tok)
        if tok.value == "(":
            ts.next()
            t = self.join()
            ts.expect(")")
            return t
        if tok.value == "|":
            ts.next()
            t = self.join()
            ts.expect("|")
            return absval(t)
        ts.error(f"unexpected {tok.value or 'end of input'!r}", tok)


def _clear_denominator(t: Term, m: Fraction) -> Term:
    """The term m·t with every scalar pushed onto the variables."""
    if isinstance(t, Var):
        if m.denominator != 1:
            raise DialectError(f"scalar {m} on x{t.i} is not an integer after clearing denominators")
        return t if m == 1 else IntScale(int(m), t)
    if isinstance(t, Sum):
        return Sum(tuple(_clear_denominator(s, m) for s in t.items))
    if isinstance(t, Neg):
        return Neg(_clear_denominator(t.arg, m))
    if isinstance(t, IntScale):
        return _clear_denominator(t.arg, m * t.k)
    if isinstance(t, FieldScale):
        return _clear_denominator(t.arg, m * t.c.to_fraction())
    cls = type(t)
    return cls(_clear_denominator(t.left, m), _clear_denominator(t.right, m))


def parse(
    text: str,
    n: int | None = None,
    dialect: "Dialect | str" = Dialect.RIESZ,
    field: NumberField | None = None,
    denominator: int = 1,
) -> Term:
    """Parse a term.

    In the ℓ-group dialect, rational scalars are accepted only together with
    a ``denominator`` D that clears them: the returned term is then D·t with
    integer scalars on the variables (same zero set, same sign pattern).
    """
    dialect = Dialect.parse(dialect)
    p = _TermParser(text, n, dialect, field or RATIONALS)
    t = p.parse()
    if dialect == Dialect.LGROUP:
        denominator = Fraction(denominator)
        if denominator <= 0 or denominator.denominator != 1:
            raise DomainError("the common denominator must be a positive integer")
        if p.rational_scalars or denominator != 1:
            t = _clear_denominator(t, denominator)
    return t


# --------------------------------------------------------------------------
# rendering


def _render_scalar(c) -> str:
    if isinstance(c, int):
        return str(c) if c >= 0 else f"({c})"
    if c.is_rational():
        v = c.to_fraction()
        if v >= 0:
            return str(v)
        return f"({v})"
    return f"({c})"


def _render_atom(t: Term) -> str:
    if isinstance(t, Var):
        return f"x{t.i}"
    if t == ZERO:
        return "0"
    if _is_abs(t):
        return f"|{render(t.left)}|"
    return f"({render(t)})"


def _render_prod(t: Term) -> str:
    if isinstance(t, Neg):
        return "-" + _render_prod(t.arg)
    if isinstance(t, IntScale):
        return f"{_render_scalar(t.k)}*{_render_atom(t.arg)}"
    if isinstance(t, FieldScale):
        return f"{_render_scalar(t.c)}*{_render_atom(t.arg)}"
    return _render_atom(t)


def _render_sum(t: Term) -> str:
    if isinstance(t, Sum) and len(t.items) >= 2:
        out = _render_prod(t.items[0])
        for item in t.items[1:]:
            if isinstance(item, Neg):
                out += " - " + _render_prod(item.arg)
            else:
                out += " + " + _render_prod(item)
        return out
    return _render_prod(t)


def _render_meet(t: Term) -> str:
    if isinstance(t, Meet):
        left = t.left
        lt = f"({render(left)})" if isinstance(left, Meet) or (isinstance(left, Join) and not _is_abs(left)) else _render_sum(left)
        return f"{lt} /\\ {_render_meet(t.right)}"
    if isinstance(t, Join) and not _is_abs(t):
        return f"({render(t)})"
    return _render_sum(t)


def render(t: Term) -> str:
    """Canonical text; ``parse(render(t)) == t`` for parser-produced terms."""
    if isinstance(t, Join) and not _is_abs(t):
        left = t.left
        lt = f"({render(left)})" if isinstance(left, Join) and not _is_abs(left) else _render_meet(left)
        return f"{lt} \\/ {render(t.right)}"
    return _render_meet(t)


# --------------------------------------------------------------------------
# JSON


def to_json(t: Term) -> dict:
    if isinstance(t, Var):
        return {"op": "var", "i": t.i}
    if isinstance(t, Sum):
        return {"op": "sum", "args": [to_json(s) for s in t.items]}
    if isinstance(t, Neg):
        return {"op": "neg", "arg": to_json(t.arg)}
    if isinstance(t, IntScale):
        return {"op": "iscale", "k": t.k, "arg": to_json(t.arg)}
    if isinstance(t, FieldScale):
        return {"op": "fscale", "c": t.c.to_json(), "arg": to_json(t.arg)}
    op = "meet" if isinstance(t, Meet) else "join"
    return {"op": op, "args": [to_json(t.left), to_json(t.right)]}


def from_json(data: dict) -> Term:
    op = data.get("op")
    if op == "var":
        return Var(int(data["i"]))
    if op == "sum":
        return Sum(tuple(from_json(s) for s in data["args"]))
    if op == "neg":
        return Neg(from_json(data["arg"]))
    if op == "iscale":
        return IntScale(int(data["k"]), from_json(data["arg"]))
    if op == "fscale":
        return FieldScale(FieldElement.from_json(data["c"]), from_json(data["arg"]))
    if op in ("meet", "join"):
        a, b = data["args"]
        cls = Meet if op == "meet" else Join
        return cls(from_json(a), from_json(b))
    raise DomainError(f"unknown term node {op!r}")


# --------------------------------------------------------------------------
# evaluation


def evaluate(t: Term, point: Sequence, zero) -> object:
    """Evaluate over any ordered group that supports +, unary −, scalar *
    and comparison (FieldElement, EpsSeries, Fraction)."""
    if isinstance(t, Var):
        if t.i >= len(point):
            raise ArityError(f"variable x{t.i} out of range for a point of length {len(point)}")
        return point[t.i]
    if isinstance(t, Sum):
        acc = zero
        for s in t.items:
            acc = acc + evaluate(s, point, zero)
        return acc
    if isinstance(t, Neg):
        return -evaluate(t.arg, point, zero)
    if isinstance(t, IntScale):
        return evaluate(t.arg, point, zero) * t.k
    if isinstance(t, FieldScale):
        return evaluate(t.arg, point, zero) * t.c
    a = evaluate(t.left, point, zero)
    b = evaluate(t.right, point, zero)
    if isinstance(t, Meet):
        return a if a <= b else b
    return a if a >= b else b


def eval_real(t: Term, p: Sequence) -> FieldElement:
    p = [c if isinstance(c, FieldElement) else RATIONALS(c) for c in p]
    fld = RATIONALS
    for c in p:
        if c.field != RATIONALS:
            fld = c.field
    return evaluate(t, p, fld.zero())


def eval_series(t: Term, p: Sequence[EpsSeries]) -> EpsSeries:
    p = [EpsSeries.lift(c) for c in p]
    return evaluate(t, p, EpsSeries.zero())


# --------------------------------------------------------------------------
# linear forms


@dataclass(frozen=True)
class LinearForm:
    coeffs: tuple  # of FieldElement

    @classmethod
    def of(cls, coeffs: Iterable, field: NumberField | None = None) -> "LinearForm":
        fld = field or RATIONALS
        out = []
        for c in coeffs:
            out.append(c if isinstance(c, FieldElement) else fld(c))
        return cls(tuple(out))

    @classmethod
    def zero(cls, n: int) -> "LinearForm":
        return cls.of([0] * n)

    @classmethod
    def unit(cls, n: int, i: int) -> "LinearForm":
        return cls.of([int(j == i) for j in range(n)])

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def __add__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "LinearForm":
        return LinearForm(tuple(-a for a in self.coeffs))

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return self + (-other)

    def scale(self, c) -> "LinearForm":
        return LinearForm(tuple(a * c for a in self.coeffs))

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.coeffs)

    def is_integer(self) -> bool:
        return all(a.is_integer() for a in self.coeffs)

    def dot(self, v: Sequence):
        """⟨coeffs, v⟩ for a vector of FieldElements or EpsSeries."""
        acc = None
        for a, x in zip(self.coeffs, v):
            term = x * a
            acc = term if acc is None else acc + term
        return acc

    __call__ = dot

    def to_term(self) -> Term:
        items = []
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            if a.is_integer() and a.to_fraction() in (1, -1):
                node = Var(i) if a.to_fraction() == 1 else Neg(Var(i))
            elif a.is_integer() and a.to_fraction() < 0:
                node = Neg(IntScale(int(-a.to_fraction()), Var(i)))
            else:
                node = scale(a, Var(i))
            items.append(node)
        if not items:
            return ZERO
        return plus(*items)

    def to_json(self) -> list:
        return [c.to_json() for c in self.coeffs]

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coeffs) + ")"


def leaf_forms(t: Term, n: int | None = None) -> set[LinearForm]:
    """Every linear piece candidate of t.

    Sums, negations and scalings are flattened by taking all combinations of
    the candidates of their children; meets and joins take unions.
    """
    if n is None:
        n = max(variables(t), default=-1) + 1
    return set(_leaf_forms(t, n))


def _leaf_forms(t: Term, n: int) -> frozenset:
    if isinstance(t, Var):
        return frozenset([LinearForm.unit(n, t.i)])
    if isinstance(t, Sum):
        if not t.items:
            return frozenset([LinearForm.zero(n)])
        pools = [_leaf_forms(s, n) for s in t.items]
        return frozenset(reduce(lambda a, b: a + b, combo) for combo in itertools.product(*pools))
    if isinstance(t, Neg):
        return frozenset(-f for f in _leaf_forms(t.arg, n))
    if isinstance(t, IntScale):
        return frozenset(f.scale(t.k) for f in _leaf_forms(t.arg, n))
    if isinstance(t, FieldScale):
        return frozenset(f.scale(t.c) for f in _leaf_forms(t.arg, n))
    return _leaf_forms(t.left, n) | _leaf_forms(t.right, n)


def form_term(coeffs: Sequence, field: NumberField | None = None) -> Term:
    return LinearForm.of(coeffs, field).to_term()
