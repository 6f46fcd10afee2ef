"""Certify global invertibility of polynomial maps via Newton polytopes at infinity."""

__version__ = "0.1.0"

from .poly import Polynomial, PolynomialMap, compose_linear, parse_polynomial, sos  # noqa: E402
from .linalg import RationalMatrix  # noqa: E402
from .geometry import classify_support, vertices_at_infinity  # noqa: E402
from .jacobian import jacobian_determinant, nonvanishing_analysis  # noqa: E402
from .certify import Options, coercivity_verdict, diffeomorphism_verdict  # noqa: E402

__all__ = [
    "Polynomial",
    "PolynomialMap",
    "RationalMatrix",
    "parse_polynomial",
    "sos",
    "compose_linear",
    "classify_support",
    "vertices_at_infinity",
    "jacobian_determinant",
    "nonvanishing_analysis",
    "coercivity_verdict",
    "diffeomorphism_verdict",
    "Options",
]
