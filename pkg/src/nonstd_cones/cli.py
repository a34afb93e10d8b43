"""Command-line front end.

Exit status: 0 success, 1 domain error (bad input, violated precondition),
2 internal invariant failure or any unexpected exception.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from typing import Any

from . import __version__
from .acceptance import CRITERIA, AcceptanceConfig, run_all
from .appendix import appendix_suite
from .coeff import NumberField
from .errors import DomainError, InvariantError
from .indexes import (
    orthogonal_decomposition,
    parse_index,
    reduce,
    render_index,
    separating_form,
    specializes,
)
from .series import parse_point, render_series
from .spectrum import (
    PrimeIdealHandle,
    linearity_fan,
    prime_leq,
    strong_unit_check,
    vanishes_on_cone,
    vcone_in_variety,
)
from .presets import load_field
from .terms import Dialect, eval_series, parse, render

@dataclass
class SessionConfig:
    field: NumberField
    dialect: Dialect = Dialect.RIESZ
    n: int | None = None
    json: bool = False
    m_max: int = 12
    denominator: int = 1


@dataclass
class Report:
    query: dict
    result: Any
    witness: Any = None
    text: str = ""
    ok: bool = True

    def to_json(self) -> dict:
        return {"query": self.query, "result": self.result, "witness": self.witness}


class _UsageError(DomainError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--field", default="q", help="preset name (q, sqrt2, sqrt2sqrt3), presets/<name>, a JSON file or inline field(poly, [lo, hi])")
    common.add_argument("--dialect", default="riesz", choices=[d.value for d in Dialect])
    common.add_argument("-n", type=int, default=None, help="arity")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--m-max", type=int, default=12, help="radius search budget for v-cones")
    common.add_argument("--denominator", type=int, default=1, help="common denominator for rational scalars in l-group terms")

    p = _Parser(prog="nonstd-cones", description="Exact prime-ideal computations over hyperreal points.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def verb(name, help_text, *flags):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        for flag, kw in flags:
            sp.add_argument(flag, **kw)
        return sp

    req = {"required": True}
    verb("eval", "evaluate a term at a series point", ("--term", req), ("--point", req))
    verb("decompose", "orthogonal decomposition of a series point", ("--point", req))
    verb("reduce", "Z-reduction of an index", ("--index", req))
    verb("member", "prime-ideal membership of a term", ("--index", req), ("--term", req))
    verb("leq", "truncation order of two prime ideals", ("--index", req), ("--other", req))
    verb("witness", "separating linear form for two points", ("--x", req), ("--y", req))
    verb("unit-check", "strong order-unit test", ("--relator", {"default": "0"}), ("--term", req))
    verb("fan", "linearity fan of a term (n <= 3)", ("--term", req), ("--all-faces", {"action": "store_true"}))
    verb("vcone", "search a v-cone inside the zero set of a term", ("--term", req), ("--index", req))
    verb("appendix", "counterexample suite")
    verb(
        "selftest",
        "run the acceptance checks",
        ("--inject-fault", {"choices": ["sign-flip"], "default": None}),
        ("--criteria", {"default": None, "help": "comma-separated criterion numbers (default: all)"}),
    )
    return p


# --------------------------------------------------------------------------
# verbs


def _term(cfg: SessionConfig, text: str):
    return parse(text, cfg.n, cfg.dialect, cfg.field, cfg.denominator)


def _point(cfg: SessionConfig, text: str):
    return parse_point(text, cfg.n, cfg.field)


def _series_json(x):
    return {"text": render_series(x), "terms": x.to_json()}


def cmd_eval(a, cfg: SessionConfig) -> Report:
    t = _term(cfg, a.term)
    x = _point(cfg, a.point)
    val = eval_series(t, x)
    return Report({"verb": "eval", "term": render(t), "point": a.point}, _series_json(val), text=render_series(val))


def cmd_decompose(a, cfg: SessionConfig) -> Report:
    d = orthogonal_decomposition(_point(cfg, a.point))
    parts = [{"alpha": _series_json(p.alpha), "dir": p.dir.to_json()} for p in d.parts]
    return Report(
        {"verb": "decompose", "point": a.point},
        {"parts": parts, "index": render_index(d.index())},
        text="\n".join(d.lines()),
    )


def cmd_reduce(a, cfg: SessionConfig) -> Report:
    v = parse_index(a.index, cfg.n, cfg.field)
    r = reduce(v)
    return Report(
        {"verb": "reduce", "index": render_index(v)},
        {"index": render_index(r), "vectors": r.to_json(), "changed": r != v},
        text=render_index(r),
    )


def cmd_member(a, cfg: SessionConfig) -> Report:
    v = parse_index(a.index, cfg.n, cfg.field)
    t = _term(cfg, a.term)
    res = vanishes_on_cone(t, v, cfg.dialect)
    return Report(
        {"verb": "member", "dialect": cfg.dialect.value, "index": render_index(v), "term": render(t)},
        res,
        text="true" if res else "false",
    )


def cmd_leq(a, cfg: SessionConfig) -> Report:
    h1 = PrimeIdealHandle(cfg.dialect, parse_index(a.index, cfg.n, cfg.field))
    h2 = PrimeIdealHandle(cfg.dialect, parse_index(a.other, cfg.n, cfg.field))
    res = prime_leq(h1, h2)
    return Report(
        {"verb": "leq", "dialect": cfg.dialect.value, "index": render_index(h1.index), "other": render_index(h2.index)},
        res,
        text="true" if res else "false",
    )


def cmd_witness(a, cfg: SessionConfig) -> Report:
    x = _point(cfg, a.x)
    y = _point(cfg, a.y)
    q = {"verb": "witness", "dialect": cfg.dialect.value, "x": a.x, "y": a.y}
    if specializes(x, y, cfg.dialect):
        return Report(q, {"specializes": True}, None, text="x lies in the closure of y; no separating form")
    f = separating_form(x, y, cfg.dialect)
    w = {"form": f.to_json(), "text": str(f), "at_x": _series_json(f.dot(x)), "at_y": _series_json(f.dot(y))}
    return Report(q, {"specializes": False}, w, text=f"{f}\nf(x) = {render_series(f.dot(x))}\nf(y) = {render_series(f.dot(y))}")


def cmd_unit_check(a, cfg: SessionConfig) -> Report:
    rel = _term(cfg, a.relator)
    cand = _term(cfg, a.term)
    res = strong_unit_check(rel, cand, cfg.n)
    return Report(
        {"verb": "unit-check", "relator": render(rel), "candidate": render(cand)},
        res,
        text="true" if res else "false",
    )


def cmd_fan(a, cfg: SessionConfig) -> Report:
    t = _term(cfg, a.term)
    pieces = linearity_fan(t, cfg.n, all_faces=a.all_faces)
    lines = []
    for p in pieces:
        region = " and ".join(f"{f} . x {cond} 0" for f, cond in p.region) or "everywhere"
        lines.append(f"{region}  ->  {p.active_form}")
    return Report({"verb": "fan", "term": render(t)}, [p.to_json() for p in pieces], text="\n".join(lines))


def cmd_vcone(a, cfg: SessionConfig) -> Report:
    t = _term(cfg, a.term)
    v = parse_index(a.index, cfg.n, cfg.field)
    cone = vcone_in_variety(t, v, cfg.dialect, cfg.m_max)
    q = {"verb": "vcone", "term": render(t), "index": render_index(v), "m_max": cfg.m_max}
    if cone is None:
        return Report(q, None, text=f"no v-cone found within m_max = {cfg.m_max}")
    radii = [str(r) for r in cone.radii]
    return Report(q, {"radii": radii}, cone.to_json(), text="radii (" + ", ".join(radii) + ")")


def cmd_appendix(a, cfg: SessionConfig) -> Report:
    n = cfg.n if cfg.n is not None else 3
    rep = appendix_suite(n, cfg.m_max)
    lines = [f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.detail}" for c in rep.checks]
    return Report({"verb": "appendix", "n": n, "m_max": cfg.m_max}, rep.to_json(), text="\n".join(lines), ok=rep.ok)


def cmd_selftest(a, cfg: SessionConfig) -> Report:
    only = None
    if a.criteria:
        try:
            only = [int(c) for c in a.criteria.split(",")]
        except ValueError:
            raise DomainError(f"bad --criteria list {a.criteria!r}") from None
        if any(not 1 <= c <= len(CRITERIA) for c in only):
            raise DomainError(f"criteria are numbered 1..{len(CRITERIA)}")
    t0 = time.perf_counter()
    rep = run_all(AcceptanceConfig(m_max=cfg.m_max), fault=a.inject_fault, only=only)
    elapsed = time.perf_counter() - t0
    lines = [r.line() for r in rep.results] + [f"{'all checks passed' if rep.ok else 'FAILED'} in {elapsed:.1f}s"]
    out = rep.to_json() | {"seconds": round(elapsed, 3)}
    return Report({"verb": "selftest", "inject_fault": a.inject_fault}, out, text="\n".join(lines), ok=rep.ok)


HANDLERS = {
    "eval": cmd_eval,
    "decompose": cmd_decompose,
    "reduce": cmd_reduce,
    "member": cmd_member,
    "leq": cmd_leq,
    "witness": cmd_witness,
    "unit-check": cmd_unit_check,
    "fan": cmd_fan,
    "vcone": cmd_vcone,
    "appendix": cmd_appendix,
    "selftest": cmd_selftest,
}


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        a = build_parser().parse_args(argv)
        cfg = SessionConfig(
            field=load_field(a.field),
            dialect=Dialect.parse(a.dialect),
            n=a.n,
            json=a.json,
            m_max=a.m_max,
            denominator=a.denominator,
        )
        if cfg.n is not None and cfg.n < 1:
            raise DomainError("arity must be positive")
        if cfg.m_max < 1:
            raise DomainError("--m-max must be positive")
        rep = HANDLERS[a.verb](a, cfg)
    except DomainError as exc:
        print(f"error: {exc}", file=err)
        return 1
    except (InvariantError, AssertionError) as exc:
        print(f"internal error: {type(exc).__name__}: {exc}", file=err)
        return 2
    except Exception as exc:  # anything else is a bug too
        print(f"internal error: {type(exc).__name__}: {exc}", file=err)
        return 2
    if cfg.json:
        print(json.dumps(rep.to_json(), ensure_ascii=False, indent=2), file=out)
    else:
        print(rep.text, file=out)
    return 0 if rep.ok else 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
