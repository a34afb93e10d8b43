"""The nine acceptance checks, seeded and exact.  Each returns a
CriterionResult; ``run_all`` drives them for the test suite and the
``selftest`` CLI verb."""

from __future__ import annotations

import contextlib
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .appendix import appendix_suite
from .coeff import RATIONALS, SQRT2, SQRT2_SQRT3
from .errors import PreconditionError
from .indexes import (
    Index,
    canonical_point,
    index_of,
    is_z_reduced,
    lgroup_specializes,
    orthogonal_decomposition,
    rational_envelope,
    reduce,
    riesz_specializes,
    separating_form,
    sign_at_index,
    truncation_leq,
    vdot,
)
from .sampling import Sampler
from .series import EpsSeries
from .spectrum import (
    c_operator,
    c_operator_real,
    fan_vanishes_at,
    linearity_fan,
    strong_unit_check,
    v_operator,
    v_operator_real,
    vanishes_on_cone,
    vcone_in_variety,
    variety_is_origin,
)
from .terms import Dialect, LinearForm, absval, eval_series, meet, parse, plus

E = EpsSeries.eps


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number}. {self.name}: {self.detail}"


@dataclass
class AcceptanceConfig:
    seed: int = 20240607
    m_max: int = 12
    appendix_m_max: int = 16


# the sign oracle used by criterion 2; swapped by inject_fault
_sign_oracle: Callable = sign_at_index


@contextlib.contextmanager
def inject_fault(kind: str | None):
    """Deliberately corrupt one oracle so that selftest can show the failure
    is caught.  Only ``sign-flip`` (negate the lexicographic sign) exists."""
    global _sign_oracle
    if kind is None:
        yield
        return
    if kind != "sign-flip":
        raise ValueError(f"unknown fault {kind!r}")
    saved = _sign_oracle
    _sign_oracle = lambda f, v, dialect=Dialect.RIESZ: -saved(f, v, dialect)  # noqa: E731
    try:
        yield
    finally:
        _sign_oracle = saved


def _pairwise_orthogonal(ix: Index) -> bool:
    vs = ix.vectors()
    return all(vdot(vs[i], vs[j]).is_zero() for i in range(len(vs)) for j in range(i))


# --------------------------------------------------------------------------


def criterion_1(cfg: AcceptanceConfig) -> tuple[bool, str]:
    s = Sampler(seed=cfg.seed + 1)
    bad = []
    for k in range(200):
        fld = (RATIONALS, SQRT2)[k % 2]
        n = s.rng.randint(1, 4)
        x = s.point(n, fld)
        d = orthogonal_decomposition(x)
        exps = [p.alpha.leading_exponent() for p in d.parts]
        ix = d.index()
        ok = (
            d.reconstruct() == x
            and all(a < b for a, b in zip(exps, exps[1:]))
            and _pairwise_orthogonal(ix)
            and len(ix) <= n
            and index_of([a * 3 for a in x]) == ix
        )
        if not ok:
            bad.append(x)
    return not bad, f"200 points, {len(bad)} failures"


def criterion_2(cfg: AcceptanceConfig) -> tuple[bool, str]:
    s = Sampler(seed=cfg.seed + 2)
    bad = 0
    for k in range(500):
        fld = (RATIONALS, SQRT2)[k % 2]
        n = s.rng.randint(1, 4)
        x = s.point(n, fld)
        f = s.form(n, fld)
        if k % 7 == 0:
            # forms vanishing on the leading direction exercise later entries
            lead = index_of(x).dirs[0].vec
            if n > 1 and not lead[1].is_zero():
                f = LinearForm((lead[1],) + (-lead[0],) + f.coeffs[2:])
        if _sign_oracle(f, index_of(x)) != f.dot(x).sign():
            bad += 1
    return bad == 0, f"500 pairs, {bad} mismatches"


def _sampled_closure(x, y, forms) -> bool:
    """x in the closure of y, judged on the sampled forms: f(y) ≥ 0 ⇒ f(x) ≥ 0."""
    return all(not (f.dot(y).sign() >= 0 and f.dot(x).sign() < 0) for f in forms)


def criterion_3(cfg: AcceptanceConfig) -> tuple[bool, str]:
    s = Sampler(seed=cfg.seed + 3)
    problems = []
    counts = {}
    for dialect in (Dialect.RIESZ, Dialect.LGROUP):
        spec_fn = riesz_specializes if dialect == Dialect.RIESZ else lgroup_specializes
        integer = dialect == Dialect.LGROUP
        hits = 0
        for k in range(100):
            fld = (RATIONALS, SQRT2)[k % 2]
            n = s.rng.randint(1, 3)
            y = s.point(n, fld)
            x = s.point_with_index_prefix(index_of(y)) if k % 3 == 0 else s.point(n, fld)
            forms = [s.form(n, fld, integer=integer) for _ in range(50)]
            claim = spec_fn(x, y)
            hits += claim
            if not claim:
                f = separating_form(x, y, dialect)
                if integer and not f.is_integer():
                    problems.append((dialect.value, k, "non-integer witness"))
                if not (f.dot(y).sign() >= 0 and f.dot(x).sign() < 0):
                    problems.append((dialect.value, k, "invalid witness"))
                forms.append(f)
            if _sampled_closure(x, y, forms) != claim:
                problems.append((dialect.value, k, "disagrees with sampled forms"))
        counts[dialect.value] = hits
    return not problems, f"specializing pairs {counts}; problems {problems[:3]}"


def criterion_4(cfg: AcceptanceConfig) -> tuple[bool, str]:
    s = Sampler(seed=cfg.seed + 4)
    bad = []
    fields = (RATIONALS, SQRT2, SQRT2_SQRT3)
    for k in range(200):
        fld = fields[k % 3]
        n = s.rng.randint(1, 4)
        v = s.index(n, fld)
        r = reduce(v)
        u = s.truncation(v)
        checks = (
            reduce(r) == r,
            (r == v) == is_z_reduced(v),
            truncation_leq(reduce(u), r),
            all(
                rational_envelope(reduce(v.prefix(i)).vectors(), n) == rational_envelope(v.prefix(i).vectors(), n)
                for i in range(1, len(v) + 1)
            ),
        )
        if not all(checks):
            bad.append((k, checks))
    return not bad, f"200 indexes, {len(bad)} failures {bad[:2]}"


def criterion_5(cfg: AcceptanceConfig) -> tuple[bool, str]:
    out = {}
    e12 = Index.of([(1, 0), (0, 1)])
    t_n = [parse(f"0 /\\ x0 /\\ x1 /\\ (x0 - {m}*x1)", 2, Dialect.LGROUP) for m in range(1, 21)]
    out["a"] = index_of([1, E(1)]) == e12 and all(vanishes_on_cone(t, e12, Dialect.LGROUP) for t in t_n)

    r2 = SQRT2.gen()
    x = [EpsSeries.const(1), EpsSeries.const(r2) + E(1)]
    y = [1, r2]
    f = separating_form(x, y, Dialect.RIESZ)
    out["b"] = (
        not riesz_specializes(x, y)
        and f.dot(y).sign() >= 0
        and f.dot(x).sign() < 0
        and lgroup_specializes(x, y)
    )
    try:
        separating_form(x, y, Dialect.LGROUP)
        out["b"] = False
    except PreconditionError:
        pass

    triple = Index.of([(1, r2, 0), (r2, -1, 1), (-r2, 1, 3)])
    out["c"] = reduce(triple) == Index.of([(1, r2, 0), (0, 0, 1)])
    out["d"] = rational_envelope([(1, r2)], 2).dim == 2
    return all(out.values()), " ".join(f"({k}) {'ok' if v else 'FAIL'}" for k, v in out.items())


def criterion_6(cfg: AcceptanceConfig) -> tuple[bool, str]:
    s = Sampler(seed=cfg.seed + 6, term_depth=3)
    indexes = {n: [s.rational_index(n) for _ in range(10)] for n in (1, 2, 3)}
    disagreements = []
    vanish = 0
    total = 0
    for k in range(50):
        n = 1 + k % 3
        t = s.term(n, Dialect.LGROUP)
        pieces = linearity_fan(t, n)
        for v in indexes[n]:
            assert is_z_reduced(v)
            a = vanishes_on_cone(t, v, Dialect.LGROUP)
            b = fan_vanishes_at(pieces, canonical_point(v))
            c = vcone_in_variety(t, v, Dialect.LGROUP, m_max=cfg.m_max) is not None
            total += 1
            vanish += a
            if not a == b == c:
                disagreements.append((k, str(v), a, b, c))
    return not disagreements, f"{total} pairs ({vanish} vanishing), {len(disagreements)} disagreements"


def criterion_7(cfg: AcceptanceConfig) -> tuple[bool, str]:
    s = Sampler(seed=cfg.seed + 7, term_depth=2)
    problems = []
    for trial in range(20):
        n = 2
        v = s.rational_index(n)
        S = [s.point_with_index_prefix(v) for _ in range(s.rng.randint(0, 5))]
        S += [s.point(n) for _ in range(s.rng.randint(0, 10 - len(S)))]
        T = [s.term(n) for _ in range(s.rng.randint(1, 10))]
        T.append(meet(*(absval(t) for t in T[:2])))
        T = T[:10]
        for _ in range(10):
            Tp = [t for t in T if s.rng.random() < 0.4]
            Sp = [x for x in S if s.rng.random() < 0.4]
            lhs = all(t in c_operator(Sp, T) for t in Tp)
            rhs = all(any(x is y for y in v_operator(Tp, S)) for x in Sp)
            if lhs != rhs:
                problems.append((trial, "galois"))
        for x in S:
            for t1, t2 in zip(T, T[1:]):
                z1 = eval_series(t1, x).is_zero()
                z2 = eval_series(t2, x).is_zero()
                if eval_series(meet(absval(t1), absval(t2)), x).is_zero() != (z1 or z2):
                    problems.append((trial, "meet identity"))
                if eval_series(plus(absval(t1), absval(t2)), x).is_zero() != (z1 and z2):
                    problems.append((trial, "sum identity"))
        R = [s.real_point(n) for _ in range(6)] + [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(0)]]
        if c_operator([[EpsSeries.lift(a) for a in p] for p in R], T) != c_operator_real(R, T):
            problems.append((trial, "C real trace"))
        series_R = [[EpsSeries.lift(a) for a in p] for p in R]
        keep = {i for i, p in enumerate(series_R) if any(p is q for q in v_operator(T, series_R))}
        real_keep = {i for i, p in enumerate(R) if any(p is q for q in v_operator_real(T, R))}
        if keep != real_keep:
            problems.append((trial, "V real trace"))
    return not problems, f"20 trials, problems {problems[:3]}"


UNIT_CORPUS = [
    # (relator, candidate, n, expected)
    ("0", "|x0| + |x1|", 2, True),
    ("x1", "|x0|", 2, True),
    ("x2", "|x0| + |x1|", 3, True),
    ("0", "x0 \\/ 0", 2, False),
    ("x1", "x0 \\/ 0", 2, False),
    ("0", "|x0|", 2, False),
]


def criterion_8(cfg: AcceptanceConfig) -> tuple[bool, str]:
    ok = variety_is_origin(parse("|x0| + |x1|"), 2)
    ok = ok and not variety_is_origin(parse("x0 /\\ 0"), 2) and not variety_is_origin(parse("x0"), 2)
    wrong = [
        (rel, cand)
        for rel, cand, n, want in UNIT_CORPUS
        if strong_unit_check(parse(rel), parse(cand), n) != want
    ]
    return ok and not wrong, f"origin checks {'ok' if ok else 'FAIL'}; corpus mismatches {wrong}"


def criterion_9(cfg: AcceptanceConfig) -> tuple[bool, str]:
    reports = {n: appendix_suite(n, cfg.appendix_m_max) for n in (2, 3, 4)}
    failed = {n: [c.name for c in r.checks if not c.passed] for n, r in reports.items()}
    return all(r.ok for r in reports.values()), f"failed checks {failed}"


CRITERIA = [
    (1, "decomposition round-trip", criterion_1),
    (2, "sign-oracle coherence", criterion_2),
    (3, "closure theorems and witnesses", criterion_3),
    (4, "reduction laws", criterion_4),
    (5, "worked examples", criterion_5),
    (6, "polyhedral cross-check", criterion_6),
    (7, "Galois and closed-set algebra", criterion_7),
    (8, "strong order-unit", criterion_8),
    (9, "appendix suite", criterion_9),
]


@dataclass
class AcceptanceReport:
    results: list[CriterionResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "criteria": [
                {"number": r.number, "name": r.name, "passed": r.passed, "detail": r.detail, "seconds": round(r.seconds, 3)}
                for r in self.results
            ],
        }


def run_criterion(number: int, cfg: AcceptanceConfig | None = None) -> CriterionResult:
    cfg = cfg or AcceptanceConfig()
    num, name, fn = CRITERIA[number - 1]
    t0 = time.perf_counter()
    try:
        passed, detail = fn(cfg)
    except Exception as exc:  # a crash is a failure of that criterion only
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    return CriterionResult(num, name, passed, detail, time.perf_counter() - t0)


def run_all(
    cfg: AcceptanceConfig | None = None, fault: str | None = None, only: list[int] | None = None
) -> AcceptanceReport:
    cfg = cfg or AcceptanceConfig()
    rep = AcceptanceReport()
    with inject_fault(fault):
        for num, _, _ in CRITERIA:
            if only is None or num in only:
                rep.results.append(run_criterion(num, cfg))
    return rep
