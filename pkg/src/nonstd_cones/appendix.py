"""The counterexample cone C = C₁ ∪ C₂ ∪ ⋯ truncated to coordinates
x₀..xₙ, with the term family that cuts it out, and the checks showing that
the real trace of C does not determine its closure.

C₁: x₀ ≥ 0, x₁ > 0, x₀/x₁ infinitesimal, all other coordinates 0.
C_m: x₀ ≥ 0, x₁ = m·x₀, x_m > 0, x₀/x_m infinitesimal, all others 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .series import EpsSeries
from .terms import ZERO, Term, absval, eval_real, eval_series, join, meet, minus, render, scale, var

E = EpsSeries.eps


@dataclass
class AppendixConfig:
    n: int = 3
    m_max: int = 16  # truncates the j ≥ 1 family and bounds the real test points


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class AppendixReport:
    n: int
    m_max: int
    terms: list[Term] = field(default_factory=list)
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m_max": self.m_max,
            "terms": len(self.terms),
            "ok": self.ok,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
        }


def _kx0_minus(k: int, i: int) -> Term:
    return minus(scale(k, var(0)), var(i))


def appendix_terms(n: int, m_max: int = 16) -> list[Term]:
    """Terms in n+1 variables vanishing on every point of C."""
    out: list[Term] = [meet(var(i), ZERO) for i in range(n + 1)]
    for i in range(2, n + 1):
        for j in range(2, n + 1):
            if i != j:
                out.append(meet(var(i), var(j)))
    for i in range(2, n + 1):
        for j in range(1, m_max + 1):
            out.append(meet(absval(var(i)), join(_kx0_minus(j, i), ZERO)))
    for i in range(2, n + 1):
        out.append(meet(absval(var(i)), absval(minus(scale(i, var(0)), var(1)))))
    for i in range(2, n + 1):
        parts = [minus(scale(i, var(0)), var(1))] + [_kx0_minus(k, k) for k in range(2, i)]
        out.append(join(meet(*parts), ZERO))
    return out


def _pt(n: int, entries: dict) -> list[EpsSeries]:
    return [EpsSeries.lift(entries.get(i, 0)) for i in range(n + 1)]


def c_samples(n: int) -> list[tuple[str, list[EpsSeries]]]:
    """Points of C₁ and of C_m for 2 ≤ m ≤ n."""
    one = Fraction(1)
    pts = [
        ("C1 (e, 1)", _pt(n, {0: E(1), 1: one})),
        ("C1 (0, 1)", _pt(n, {1: one})),
        ("C1 (e^2, 3)", _pt(n, {0: E(2) * 1, 1: Fraction(3)})),
        ("C1 (1, e^-1)", _pt(n, {0: one, 1: E(-1)})),
    ]
    for m in range(2, n + 1):
        pts += [
            (f"C{m} (1/{m}, 1, e^-1)", _pt(n, {0: Fraction(1, m), 1: one, m: E(-1)})),
            (f"C{m} (e, {m}e, 1)", _pt(n, {0: E(1), 1: E(1) * m, m: one})),
            (f"C{m} (0, 0, 1)", _pt(n, {m: one})),
            (f"C{m} (1, {m}, e^-2)", _pt(n, {0: one, 1: Fraction(m), m: E(-2)})),
        ]
    return pts


def real_trace_samples(n: int, scales=(Fraction(1), Fraction(5, 2))) -> list[list[Fraction]]:
    """C ∩ ℝ^{n+1} consists of the rays r·e_m, r ≥ 0, for m = 1..n."""
    pts = [[Fraction(0)] * (n + 1)]
    for m in range(1, n + 1):
        for r in scales:
            p = [Fraction(0)] * (n + 1)
            p[m] = r
            pts.append(p)
    return pts


def appendix_suite(n: int = 3, m_max: int = 16) -> AppendixReport:
    if n < 1:
        raise ValueError("appendix suite needs n >= 1")
    terms = appendix_terms(n, m_max)
    rep = AppendixReport(n, m_max, terms)

    bad = [
        (label, render(t))
        for label, x in c_samples(n)
        for t in terms
        if not eval_series(t, x).is_zero()
    ]
    rep.checks.append(
        Check("terms vanish on sampled points of C", not bad, f"{len(terms)} terms; failures: {bad[:3]}")
    )

    y = _pt(n, {0: E(1), 1: Fraction(1)})
    x0 = var(0)
    trace_ok = all(eval_real(x0, p).is_zero() for p in real_trace_samples(n))
    at_y = eval_series(x0, y)
    rep.checks.append(
        Check(
            "x0 vanishes on the real trace but not at y = (e, 1, 0, ...)",
            trace_ok and at_y == E(1),
            f"x0(y) = {at_y}",
        )
    )

    bad_real = []
    for m in range(n + 1, m_max + 1):
        p = [Fraction(1, m), Fraction(1)] + [Fraction(0)] * (n - 1)
        bad_real += [(m, render(t)) for t in terms if not eval_real(t, p).is_zero()]
    rep.checks.append(
        Check(
            f"terms vanish at (1/m, 1, 0, ...) for {n} < m <= {m_max}",
            not bad_real,
            f"failures: {bad_real[:3]}",
        )
    )

    # y lies in C₁, so y is in the closure of C while missing V(C(C ∩ ℝ))
    in_c = all(eval_series(t, y).is_zero() for t in terms)
    rep.checks.append(Check("y satisfies every term of the family", in_c))
    return rep
