"""Relative Steiner polynomials: validation, realization, roots and root cones."""

from .ulc_core import (
    CoeffSequence,
    QuermassTuple,
    SteinerRejection,
    UlcReport,
    af_equalities,
    binomial,
    c_coeff,
    check_ulc,
    coeffs_from_quermass,
    newton_check,
    quermass_from_coeffs,
    support_interval,
    validate_steiner,
)
from .polyroots import (
    ComplexPolynomial,
    RootFindingError,
    RootSet,
    antiderivative_steiner,
    derivative_steiner,
    elem_sym,
    min_angle_root,
    poly_from_roots,
    reciprocal,
    roots,
    steiner_from_roots,
    truncated_binomial,
)
from . import conescan, hull, realize
from .realize import RealizationError, SimplexPair, build_simplex_pair, verify_realization

__all__ = [
    "RealizationError",
    "SimplexPair",
    "build_simplex_pair",
    "conescan",
    "hull",
    "realize",
    "verify_realization",
    "CoeffSequence",
    "ComplexPolynomial",
    "QuermassTuple",
    "RootFindingError",
    "RootSet",
    "SteinerRejection",
    "UlcReport",
    "af_equalities",
    "antiderivative_steiner",
    "binomial",
    "c_coeff",
    "check_ulc",
    "coeffs_from_quermass",
    "derivative_steiner",
    "elem_sym",
    "min_angle_root",
    "newton_check",
    "poly_from_roots",
    "quermass_from_coeffs",
    "reciprocal",
    "roots",
    "steiner_from_roots",
    "support_interval",
    "truncated_binomial",
    "validate_steiner",
]

__version__ = "0.1.0"
