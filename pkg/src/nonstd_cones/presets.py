"""Field presets: shipped JSON files, an override directory from the
environment, explicit JSON paths, or inline ``field(poly, [lo, hi])`` text."""

from __future__ import annotations

import json
import os
from importlib import resources
from pathlib import Path

from ._lexer import TokenStream
from .coeff import RATIONALS, NumberField, parse_field_spec
from .errors import DomainError

ENV_VAR = "NONSTD_CONES_PRESETS"


def preset_names() -> list[str]:
    return sorted(p.name[:-5] for p in resources.files(__package__).joinpath("presets").iterdir() if p.name.endswith(".json"))


def _read(path) -> NumberField:
    try:
        p = path if hasattr(path, "read_text") else Path(path)
        data = json.loads(p.read_text(encoding="utf-8"))
        return NumberField.from_json(data)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise DomainError(f"cannot read field preset {path}: {exc}") from exc


def load_field(spec: str | None) -> NumberField:
    """Resolve ``q``, ``sqrt2``, ``presets/sqrt2``, a JSON file path, or
    inline ``field(x^2-2, [7/5, 3/2])``."""
    if spec is None or spec in ("", "q", "presets/q"):
        return RATIONALS
    if spec.lstrip().startswith("field"):
        ts = TokenStream(spec)
        fld = parse_field_spec(ts)
        ts.expect_end()
        return fld
    name = spec[len("presets/"):] if spec.startswith("presets/") else spec
    if name.endswith(".json"):
        name = name[:-5]
    override = os.environ.get(ENV_VAR)
    if override:
        cand = Path(override) / f"{name}.json"
        if cand.is_file():
            return _read(cand)
    shipped = resources.files(__package__).joinpath("presets").joinpath(f"{name}.json")
    if "/" not in name and shipped.is_file():
        return _read(shipped)
    if Path(spec).is_file():
        return _read(spec)
    raise DomainError(f"unknown field preset {spec!r} (known: {', '.join(preset_names())})")
