"""Shared tokenizer and the small arithmetic-expression parser used for
field elements, ε-series and minimal polynomials."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import ParseError

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>/\\|\\/|[-+*/^()\[\]|,@{}:"])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "ident", "op", "end"
    value: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), pos))
        pos = m.end()
    out.append(Token("end", "", len(text)))
    return out


class TokenStream:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self, k: int = 0) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        self.i = min(self.i + 1, len(self.tokens) - 1)
        return tok

    def at(self, value: str, k: int = 0) -> bool:
        tok = self.peek(k)
        return tok.kind != "end" and tok.value == value

    def accept(self, value: str) -> bool:
        if self.at(value):
            self.next()
            return True
        return False

    def expect(self, value: str) -> Token:
        tok = self.peek()
        if tok.value != value or tok.kind == "end":
            self.error(f"expected {value!r}, found {tok.value or 'end of input'!r}")
        return self.next()

    def expect_end(self):
        tok = self.peek()
        if tok.kind != "end":
            self.error(f"unexpected trailing input {tok.value!r}")

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise ParseError(message, tok.pos, self.text)

    def matching_paren(self, k: int = 0) -> int:
        """Offset (relative to the cursor) of the ')' closing the '(' at offset k."""
        depth = 0
        j = k
        while True:
            tok = self.peek(j)
            if tok.kind == "end":
                self.error("unbalanced parenthesis", self.peek(k))
            if tok.value == "(":
                depth += 1
            elif tok.value == ")":
                depth -= 1
                if depth == 0:
                    return j
            j += 1


def parse_rational(ts: TokenStream) -> Fraction:
    tok = ts.next()
    if tok.kind != "num":
        ts.error("expected a number", tok)
    value = Fraction(int(tok.value))
    if ts.at("/") and ts.peek(1).kind == "num":
        ts.next()
        den = int(ts.next().value)
        if den == 0:
            ts.error("zero denominator", tok)
        value /= den
    return value


def parse_signed_rational(ts: TokenStream) -> Fraction:
    if ts.accept("-"):
        return -parse_rational(ts)
    ts.accept("+")
    return parse_rational(ts)


class ExprParser:
    """Recursive-descent parser for sums of products of rationals and
    symbols raised to rational powers.

    ``const`` lifts a Fraction into the value domain; ``symbols`` maps an
    identifier to a callable taking the (Fraction) exponent.
    """

    def __init__(self, ts: TokenStream, const: Callable, symbols: dict[str, Callable]):
        self.ts = ts
        self.const = const
        self.symbols = symbols

    def parse(self):
        value = self.expr()
        self.ts.expect_end()
        return value

    def expr(self):
        ts = self.ts
        if ts.accept("-"):
            value = -self.term()
        else:
            ts.accept("+")
            value = self.term()
        while ts.at("+") or ts.at("-"):
            op = ts.next().value
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.ts.at("*"):
            self.ts.next()
            value = value * self.factor()
        return value

    def factor(self):
        ts = self.ts
        tok = ts.peek()
        if tok.kind == "num":
            return self.const(parse_rational(ts))
        if tok.kind == "ident":
            if tok.value not in self.symbols:
                ts.error(f"unknown symbol {tok.value!r}", tok)
            ts.next()
            exponent = Fraction(1)
            if ts.accept("^"):
                if ts.accept("("):
                    exponent = parse_signed_rational(ts)
                    ts.expect(")")
                else:
                    exponent = parse_signed_rational(ts)
            try:
                return self.symbols[tok.value](exponent)
            except ValueError as exc:
                ts.error(str(exc), tok)
        if tok.value == "(":
            ts.next()
            value = self.expr()
            ts.expect(")")
            return value
        ts.error(f"unexpected {tok.value or 'end of input'!r}", tok)


def integer_exponent(q: Fraction) -> int:
    if q.denominator != 1 or q < 0:
        raise ValueError(f"exponent must be a non-negative integer, got {q}")
    return int(q)
