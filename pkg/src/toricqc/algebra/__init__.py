"""Exact arithmetic: Q(i) scalars, polynomials, truncated series, rational functions."""

from .poly import Poly
from .rational import RationalFunction, rational_from_series, residue_at_one
from .scalar import I, Scalar, format_scalar, parse_scalar
from .series import TruncatedSeries, series_mul
from .zexp import ZExpansion
from .parse import parse_expression, parse_poly, parse_rational

__all__ = [
    "I", "Poly", "RationalFunction", "Scalar", "TruncatedSeries", "ZExpansion",
    "format_scalar", "parse_expression", "parse_poly", "parse_rational", "parse_scalar",
    "rational_from_series", "residue_at_one", "series_mul",
]
