"""Multivariate power series truncated to a box of exponents.

A series remembers per-variable upper bounds (and optionally a bound on the
total degree).  Every coefficient stored lies inside those bounds, which is
what makes products exact: the coefficient of q^e in a product only involves
exponents that are componentwise <= e.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Mapping, Optional, Sequence, Tuple

from ..errors import StructuralError
from .poly import Exponent, Poly, format_monomial, norm_coeff

__all__ = ["TruncatedSeries", "series_mul"]


def _inside(e: Exponent, bounds: Tuple[int, ...], total: Optional[int]) -> bool:
    for k, b in zip(e, bounds):
        if k > b:
            return False
    return total is None or sum(e) <= total


class TruncatedSeries:
    __slots__ = ("names", "bounds", "total", "terms")

    def __init__(self, names: Sequence[str], bounds: Sequence[int],
                 terms: Mapping[Exponent, object] | None = None, total: Optional[int] = None):
        self.names = tuple(names)
        self.bounds = tuple(int(b) for b in bounds)
        if len(self.bounds) != len(self.names):
            raise StructuralError("one truncation bound per variable is required")
        self.total = total
        self.terms: Dict[Exponent, object] = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != len(self.names):
                raise StructuralError(f"exponent {e} has wrong length")
            if c and _inside(e, self.bounds, total):
                self.terms[e] = norm_coeff(c)

    @property
    def variable_count(self) -> int:
        return len(self.names)

    @classmethod
    def from_poly(cls, p: Poly, bounds: Sequence[int], total: Optional[int] = None):
        return cls(p.names, bounds, p.terms, total)

    def to_poly(self) -> Poly:
        return Poly(self.names, self.terms)

    def coefficient(self, e: Exponent):
        return self.terms.get(tuple(e), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def _meet(self, other: "TruncatedSeries"):
        if self.names != other.names:
            raise StructuralError(
                f"series variable mismatch: {self.variable_count} vs {other.variable_count} variables")
        bounds = tuple(min(a, b) for a, b in zip(self.bounds, other.bounds))
        if self.total is None:
            total = other.total
        elif other.total is None:
            total = self.total
        else:
            total = min(self.total, other.total)
        return bounds, total

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, Poly):
            return TruncatedSeries.from_poly(other, self.bounds, self.total)
        return TruncatedSeries(self.names, self.bounds, {(0,) * len(self.names): other}, self.total)

    def __add__(self, other):
        o = self._coerce(other)
        bounds, total = self._meet(o)
        out = {e: c for e, c in self.terms.items()}
        for e, c in o.terms.items():
            out[e] = out.get(e, 0) + c
        return TruncatedSeries(self.names, bounds, out, total)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.names, self.bounds, {e: -c for e, c in self.terms.items()},
                               self.total)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (TruncatedSeries, Poly)):
            return series_mul(self, self._coerce(other))
        return TruncatedSeries(self.names, self.bounds,
                               {e: c * other for e, c in self.terms.items()}, self.total)

    def __rmul__(self, other):
        if isinstance(other, Poly):
            return series_mul(self._coerce(other), self)
        return TruncatedSeries(self.names, self.bounds,
                               {e: other * c for e, c in self.terms.items()}, self.total)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.names, self.bounds, self.total, self.terms) == (
            other.names, other.bounds, other.total, other.terms)

    def __hash__(self):
        return hash((self.names, self.bounds, self.total, frozenset(self.terms.items())))

    def truncate(self, bounds: Sequence[int], total: Optional[int] = None) -> "TruncatedSeries":
        bounds = tuple(min(a, b) for a, b in zip(self.bounds, bounds))
        if total is None:
            total = self.total
        elif self.total is not None:
            total = min(total, self.total)
        return TruncatedSeries(self.names, bounds, self.terms, total)

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse; needs an invertible constant term."""
        zero = (0,) * self.variable_count
        c0 = self.terms.get(zero, 0)
        if not c0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        inv0 = norm_coeff(Fraction(1, c0)) if isinstance(c0, int) else 1 / c0
        rest = {e: c for e, c in self.terms.items() if e != zero}
        out: Dict[Exponent, object] = {}
        # process exponents in an order compatible with divisibility
        order = sorted(_box(self.bounds, self.total), key=sum)
        for e in order:
            if e == zero:
                out[e] = inv0
                continue
            acc = 0
            for f, c in rest.items():
                g = tuple(x - y for x, y in zip(e, f))
                if min(g) < 0:
                    continue
                v = out.get(g)
                if v:
                    acc = acc + c * v
            if acc:
                out[e] = norm_coeff(-acc * inv0)
        return TruncatedSeries(self.names, self.bounds, out, self.total)

    def __str__(self):
        if not self.terms:
            return f"O({self._order_text()})"
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), e)):
            parts.append(f"({self.terms[e]})*{format_monomial(e, self.names)}")
        return " + ".join(parts) + f" + O({self._order_text()})"

    def _order_text(self):
        return ",".join(f"{n}^{b + 1}" for n, b in zip(self.names, self.bounds))

    __repr__ = __str__


def _box(bounds, total):
    out = [()]
    for b in bounds:
        out = [e + (k,) for e in out for k in range(b + 1)]
    if total is not None:
        out = [e for e in out if sum(e) <= total]
    return out


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Exact product modulo the componentwise-minimum truncation."""
    bounds, total = a._meet(b)
    out: Dict[Exponent, object] = {}
    bt = list(b.terms.items())
    for ea, ca in a.terms.items():
        if not _inside(ea, bounds, total):
            continue
        for eb, cb in bt:
            e = tuple(x + y for x, y in zip(ea, eb))
            if not _inside(e, bounds, total):
                continue
            v = out.get(e)
            out[e] = ca * cb if v is None else v + ca * cb
    return TruncatedSeries(a.names, bounds, out, total)
