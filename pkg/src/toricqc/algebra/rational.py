"""Rational functions whose denominators are products of a few known factors.

The factors that occur in practice are things like ``1 - q2`` or
``1 - q2 - q3``.  A :class:`RationalFunction` keeps its denominator as a
factored product so that residues along ``q = 1`` and reductions only need
exact polynomial division, never a general gcd.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

from ..errors import (EvaluationPole, HigherOrderPole, InsufficientOrders, NoClosedForm,
                      NonIsolatedPole, StructuralError)
from .poly import Poly
from .scalar import Scalar
from .series import TruncatedSeries

__all__ = ["RationalFunction", "rational_from_series", "residue_at_one", "format_factor"]


def format_factor(p: Poly) -> str:
    return "(" + str(p).replace(" ", "") + ")"


def _normalise_factors(num: Poly, den: Iterable[Tuple[Poly, int]]):
    """Make every factor primitive, fold constants into the numerator and split
    monomial factors into single variables."""
    merged: Dict[Poly, int] = {}
    for f, m in den:
        if m <= 0:
            if m < 0:
                num = num * f ** (-m)
            continue
        if f.names != num.names:
            raise StructuralError(f"factor variables {f.names} differ from numerator {num.names}")
        if f.is_zero():
            raise EvaluationPole("denominator factor is identically zero")
        c, p = f.primitive()
        num = num.scale(Fraction(1) / c ** m)
        if p.is_constant():
            continue
        if len(p.terms) == 1:
            (e,) = p.terms
            for i, k in enumerate(e):
                if k:
                    v = Poly.var(p.names, p.names[i])
                    merged[v] = merged.get(v, 0) + k * m
            continue
        merged[p] = merged.get(p, 0) + m
    return num, merged


class RationalFunction:
    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Iterable[Tuple[Poly, int]] = ()):
        num, merged = _normalise_factors(num, den)
        # cancel factors that divide the numerator
        if num.is_zero():
            merged = {}
        else:
            for f in list(merged):
                while merged[f] > 0:
                    q = num.exact_quotient(f)
                    if q is None:
                        break
                    num = q
                    merged[f] -= 1
                if merged[f] == 0:
                    del merged[f]
        self.num = num
        self.den: Tuple[Tuple[Poly, int], ...] = tuple(
            sorted(merged.items(), key=lambda fm: (fm[0].total_degree(), str(fm[0]))))

    # -- construction ----------------------------------------------------
    @classmethod
    def from_poly(cls, p: Poly) -> "RationalFunction":
        r = cls.__new__(cls)
        r.num = p
        r.den = ()
        return r

    @classmethod
    def const(cls, names, c) -> "RationalFunction":
        return cls.from_poly(Poly.const(names, c))

    @classmethod
    def zero(cls, names) -> "RationalFunction":
        return cls.from_poly(Poly.zero(names))

    @property
    def names(self):
        return self.num.names

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_polynomial(self) -> bool:
        return not self.den

    def denominator(self) -> Poly:
        out = Poly.one(self.names)
        for f, m in self.den:
            out = out * f ** m
        return out

    # -- arithmetic ----------------------------------------------------------
    def _coerce(self, other) -> Optional["RationalFunction"]:
        if isinstance(other, RationalFunction):
            if other.names != self.names:
                raise StructuralError(f"variable mismatch {self.names} vs {other.names}")
            return other
        if isinstance(other, Poly):
            return RationalFunction.from_poly(other)
        if isinstance(other, (int, Fraction, Scalar)):
            return RationalFunction.const(self.names, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.den:
            if not self.den:
                return RationalFunction.from_poly(self.num + o.num)
            return RationalFunction(self.num + o.num * self.denominator(), self.den)
        common: Dict[Poly, int] = dict(self.den)
        for f, m in o.den:
            common[f] = max(common.get(f, 0), m)
        num = self.num * _cofactor(common, self.den) + o.num * _cofactor(common, o.den)
        return RationalFunction(num, common.items())

    __radd__ = __add__

    def __neg__(self):
        r = RationalFunction.__new__(RationalFunction)
        r.num = -self.num
        r.den = self.den
        return r

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.den and o.num.is_constant():
            r = RationalFunction.__new__(RationalFunction)
            r.num = self.num.scale(o.num.constant_term())
            r.den = self.den if r.num else ()
            return r
        if not self.den and not o.den:
            return RationalFunction.from_poly(self.num * o.num)
        return RationalFunction(self.num * o.num, list(self.den) + list(o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a nonzero number or by a polynomial treated as one factor."""
        if isinstance(other, RationalFunction):
            inv = RationalFunction(other.denominator(), [(other.num, 1)])
            return self * inv
        if isinstance(other, Poly):
            return RationalFunction(self.num, list(self.den) + [(other, 1)])
        if not other:
            raise ZeroDivisionError("division of a rational function by zero")
        return self * (Scalar(1) / other if isinstance(other, Scalar) else Fraction(1) / other)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        out = RationalFunction.const(self.names, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, RationalFunction) and other.names != self.names:
            return False
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return self.num == o.num
        common: Dict[Poly, int] = dict(self.den)
        for f, m in o.den:
            common[f] = max(common.get(f, 0), m)
        return self.num * _cofactor(common, self.den) == o.num * _cofactor(common, o.den)

    def __hash__(self):
        return hash((self.num, self.den))

    # -- evaluation ----------------------------------------------------------
    def substitute(self, values: Mapping[str, object]) -> "RationalFunction":
        num = self.num.substitute(values)
        den = []
        for f, m in self.den:
            g = f.substitute(values)
            if g.is_zero():
                raise EvaluationPole(
                    f"factor {format_factor(f)} vanishes at {dict(values)}")
            den.append((g, m))
        return RationalFunction(num, den)

    def evaluate(self, values: Mapping[str, object]):
        r = self.substitute(values)
        if r.den or not r.num.is_constant():
            raise StructuralError(f"evaluation of {self} did not give a number")
        return r.num.constant_term()

    def constant_value(self):
        """The value when the function is a constant, else raise."""
        if self.den or not self.num.is_constant():
            raise StructuralError(f"{self} is not constant")
        return self.num.constant_term()

    def is_constant(self) -> bool:
        return not self.den and self.num.is_constant()

    def expand(self, bounds: Sequence[int], total: Optional[int] = None) -> TruncatedSeries:
        """Taylor expansion at q = 0 inside the given box."""
        s = TruncatedSeries.from_poly(self.num, bounds, total)
        for f, m in self.den:
            if not f.constant_term():
                raise EvaluationPole(f"factor {format_factor(f)} vanishes at the origin")
            inv = TruncatedSeries.from_poly(f, bounds, total).inverse()
            for _ in range(m):
                s = s * inv
        return s

    def extend(self, names) -> "RationalFunction":
        return RationalFunction(self.num.extend(names), [(f.extend(names), m) for f, m in self.den])

    def pole_order(self, factor: Poly) -> int:
        _, p = factor.primitive()
        for f, m in self.den:
            if f == p:
                return m
        return 0

    # -- text ------------------------------------------------------------------
    def __str__(self):
        if not self.den:
            return str(self.num)
        nt = str(self.num)
        if len(self.num.terms) > 1:
            nt = f"({nt})"
        dt = "*".join(f"{format_factor(f)}^{m}" for f, m in self.den)
        return f"{nt} / {dt}"

    def __repr__(self):
        return f"RationalFunction({str(self)!r})"


def _cofactor(common: Mapping[Poly, int], den: Sequence[Tuple[Poly, int]]) -> Poly:
    have = dict(den)
    out = None
    for f, m in common.items():
        k = m - have.get(f, 0)
        if k:
            out = f ** k if out is None else out * f ** k
    if out is None:
        first = next(iter(common), None)
        return Poly.one(first.names) if first is not None else 1
    return out


def rational_from_series(s: TruncatedSeries, ansatz: Sequence[Poly],
                         degree_cap: Union[int, Mapping[str, int], None] = None,
                         margin: int = 2, exact_vars: Sequence[str] = ()) -> RationalFunction:
    """Recover N/D from its expansion with D dividing the product of ``ansatz``.

    ``degree_cap`` bounds the numerator degree per variable (an int applies to
    every variable).  The box must carry ``margin`` orders beyond what the fit
    consumes, except in ``exact_vars`` where the caller guarantees (e.g. by
    grading) that nothing lives beyond the box.
    """
    names = s.names
    D = Poly.one(names)
    for f in ansatz:
        D = D * f.extend(names)
    caps: Dict[str, int] = {}
    for i, v in enumerate(names):
        a = D.degree(v) if not D.is_constant() else 0
        a = max(a, 0)
        m = 0 if v in exact_vars else margin
        if degree_cap is None:
            cap = s.bounds[i] - a - m
        elif isinstance(degree_cap, int):
            cap = degree_cap
        else:
            cap = degree_cap.get(v, s.bounds[i] - a - m)
        if cap < 0 or s.bounds[i] < cap + a + m:
            raise InsufficientOrders(
                f"{v}: {s.bounds[i]} orders computed, need {max(cap, 0) + a + m}")
        caps[v] = cap
    # multiplying by D is the exact solve of the linear system for the numerator
    product = s * D
    limit = [caps[v] + (max(D.degree(v), 0)) for v in names]
    keep, extra = {}, {}
    for e, c in product.terms.items():
        if all(k <= b for k, b in zip(e, limit)):
            keep[e] = c
        else:
            extra[e] = c
    if extra:
        raise NoClosedForm(f"series is not N/D within the ansatz ({len(extra)} stray terms)",
                           series=s)
    factors = [(f.extend(names), 1) for f in ansatz]
    r = RationalFunction(Poly(names, keep), factors)
    for i, v in enumerate(names):
        if r.num.degree(v) > caps[v]:
            raise NoClosedForm(f"numerator degree in {v} exceeds cap {caps[v]}", series=s)
    if r.expand(s.bounds, s.total) != s:
        raise NoClosedForm("fitted closed form does not reproduce the series", series=s)
    return r


def residue_at_one(f: RationalFunction, var: str, convention: str = "plain") -> RationalFunction:
    """Residue along ``var = 1``.

    ``plain``: lim (1 - var) f.   ``dlog``: residue of f dvar/var, i.e. lim (var - 1) f / var.
    """
    if convention not in ("plain", "dlog"):
        raise ValueError(f"unknown residue convention {convention!r}")
    names = f.names
    line = Poly.one(names) - Poly.var(names, var)
    order = 0
    rest = []
    for g, m in f.den:
        if g == line:
            order = m
            continue
        if g.substitute({var: 1}).is_zero():
            raise NonIsolatedPole(f"factor {format_factor(g)} also vanishes along {var} = 1")
        rest.append((g, m))
    if order == 0:
        return RationalFunction.zero(names)
    if order > 1:
        raise HigherOrderPole(f"pole of order {order} along {var} = 1")
    value = RationalFunction(f.num, rest).substitute({var: 1})
    return value if convention == "plain" else -value
