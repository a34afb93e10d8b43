"""Seeded generators of random points, indexes, forms and terms, shared by
the acceptance suite, the scripts and the tests."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .coeff import RATIONALS, FieldElement, NumberField
from .indexes import Index, canonical_point, index_from_vectors
from .series import EpsSeries
from .terms import ZERO, Dialect, FieldScale, IntScale, Join, LinearForm, Meet, Neg, Sum, Term, var

EXPONENTS = (Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3))


@dataclass
class SamplerConfig:
    seed: int = 0
    coeff_bound: int = 3
    max_series_terms: int = 4
    term_depth: int = 3


class Sampler:
    def __init__(self, config: SamplerConfig | None = None, **overrides):
        cfg = config or SamplerConfig()
        for k, v in overrides.items():
            setattr(cfg, k, v)
        self.cfg = cfg
        self.rng = random.Random(cfg.seed)

    # -- scalars -----------------------------------------------------------

    def integer(self, nonzero: bool = False) -> int:
        b = self.cfg.coeff_bound
        while True:
            k = self.rng.randint(-b, b)
            if k or not nonzero:
                return k

    def rational(self, nonzero: bool = False) -> Fraction:
        return Fraction(self.integer(nonzero), self.rng.choice((1, 1, 2, 3)))

    def element(self, field: NumberField = RATIONALS, nonzero: bool = False) -> FieldElement:
        while True:
            coords = [self.rational() for _ in range(field.degree)]
            if self.rng.random() < 0.5:
                coords = [coords[0]] + [Fraction(0)] * (field.degree - 1)
            x = field.element(coords)
            if not (nonzero and x.is_zero()):
                return x

    # -- series and points -------------------------------------------------

    def series(self, field: NumberField = RATIONALS, max_terms: int | None = None) -> EpsSeries:
        k = self.rng.randint(0, max_terms or self.cfg.max_series_terms)
        exps = self.rng.sample(EXPONENTS, k)
        return EpsSeries([(q, self.element(field, nonzero=True)) for q in exps], field)

    def point(self, n: int, field: NumberField = RATIONALS) -> list[EpsSeries]:
        while True:
            p = [self.series(field) for _ in range(n)]
            if any(not a.is_zero() for a in p):
                return p

    def real_point(self, n: int, field: NumberField = RATIONALS) -> list[FieldElement]:
        return [self.element(field) for _ in range(n)]

    # -- indexes -----------------------------------------------------------

    def index(self, n: int, field: NumberField = RATIONALS) -> Index:
        while True:
            k = self.rng.randint(1, n)
            vecs = [self.real_point(n, field) for _ in range(k)]
            if any(not a.is_zero() for v in vecs for a in v):
                return index_from_vectors(vecs)

    def rational_index(self, n: int) -> Index:
        """Rational orthogonal indexes are automatically Z-reduced."""
        return self.index(n, RATIONALS)

    def truncation(self, v: Index) -> Index:
        return Index(v.dirs[: self.rng.randint(1, len(v))])

    def point_with_index_prefix(self, v: Index) -> list[EpsSeries]:
        """A positive-coefficient point whose index is a truncation of v."""
        u = self.truncation(v)
        p = canonical_point(u)
        c = Fraction(self.rng.randint(1, 4), self.rng.randint(1, 3))
        return [a.scale(c) for a in p]

    # -- forms and terms ---------------------------------------------------

    def form(self, n: int, field: NumberField = RATIONALS, integer: bool = False) -> LinearForm:
        if integer:
            return LinearForm.of([self.integer() for _ in range(n)])
        return LinearForm(tuple(self.element(field) for _ in range(n)))

    def term(self, n: int, dialect: Dialect = Dialect.LGROUP, field: NumberField = RATIONALS, depth: int | None = None) -> Term:
        depth = self.cfg.term_depth if depth is None else depth
        r = self.rng.random()
        if depth == 0 or r < 0.25:
            if self.rng.random() < 0.1:
                return ZERO
            return var(self.rng.randrange(n))
        op = self.rng.choice(("sum", "neg", "scale", "meet", "join", "meet", "join"))
        sub = lambda: self.term(n, dialect, field, depth - 1)  # noqa: E731
        if op == "sum":
            return Sum((sub(), sub()))
        if op == "neg":
            return Neg(sub())
        if op == "scale":
            if dialect == Dialect.RIESZ and field != RATIONALS and self.rng.random() < 0.5:
                return FieldScale(self.element(field, nonzero=True), sub())
            return IntScale(self.rng.randint(2, self.cfg.coeff_bound), sub())
        if op == "meet":
            return Meet(sub(), sub())
        return Join(sub(), sub())
