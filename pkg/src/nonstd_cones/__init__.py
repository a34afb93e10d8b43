"""Exact computations with prime ideals of free ℓ-groups and free Riesz
spaces, realized through hyperreal points modelled by finite ε-series."""

from .coeff import RATIONALS, SQRT2, SQRT2_SQRT3, FieldElement, NumberField, parse_element
from .errors import (
    ArityError,
    DialectError,
    DomainError,
    FieldMismatchError,
    InvariantError,
    ParseError,
    PreconditionError,
)
from .indexes import (
    Direction,
    Index,
    RationalSubspace,
    canonical_point,
    index_of,
    is_z_reduced,
    orthogonal_decomposition,
    parse_index,
    rational_envelope,
    reduce,
    separating_form,
    sign_at_index,
    specializes,
    truncation_leq,
)
from .series import EpsSeries, parse_point, parse_series
from .spectrum import (
    PrimeIdealHandle,
    VCone,
    linearity_fan,
    strong_unit_check,
    vanishes_on_cone,
    variety_is_origin,
    vcone_in_variety,
)
from .terms import Dialect, LinearForm, eval_real, eval_series, parse, render

__version__ = "0.1.0"

__all__ = [
    "ArityError",
    "DialectError",
    "Direction",
    "DomainError",
    "Dialect",
    "EpsSeries",
    "FieldElement",
    "FieldMismatchError",
    "Index",
    "InvariantError",
    "LinearForm",
    "NumberField",
    "ParseError",
    "PreconditionError",
    "PrimeIdealHandle",
    "RATIONALS",
    "RationalSubspace",
    "SQRT2",
    "SQRT2_SQRT3",
    "VCone",
    "canonical_point",
    "eval_real",
    "eval_series",
    "index_of",
    "is_z_reduced",
    "linearity_fan",
    "orthogonal_decomposition",
    "parse",
    "parse_element",
    "parse_index",
    "parse_point",
    "parse_series",
    "rational_envelope",
    "reduce",
    "render",
    "separating_form",
    "sign_at_index",
    "specializes",
    "strong_unit_check",
    "truncation_leq",
    "vanishes_on_cone",
    "variety_is_origin",
    "vcone_in_variety",
]
