"""Sparse multivariate polynomials with exact coefficients.

Coefficients may be ``int``, ``Fraction`` or :class:`Scalar`; products of
mixed kinds are fine.  A polynomial carries its tuple of variable names and
binary operations require the names to agree (use :meth:`Poly.extend` to
move a polynomial into a bigger ring).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from ..errors import StructuralError
from .scalar import Scalar, format_scalar

Exponent = Tuple[int, ...]

__all__ = ["Poly", "format_monomial", "parse_monomial", "norm_coeff"]


def norm_coeff(c):
    """Canonical representative: real Scalars become Fractions, integral Fractions ints."""
    if isinstance(c, Scalar):
        if c.im == 0:
            c = c.re
        else:
            return c
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def format_monomial(exp: Exponent, names: Sequence[str]) -> str:
    parts = []
    for e, n in zip(exp, names):
        if e == 1:
            parts.append(n)
        elif e:
            parts.append(f"{n}^{e}")
    return "*".join(parts) if parts else "1"


def parse_monomial(text: str, names: Sequence[str]) -> Exponent:
    """Parse ``q1^2*q2`` into an exponent tuple over ``names``."""
    exp = [0] * len(names)
    text = text.strip()
    if text in ("", "1"):
        return tuple(exp)
    index = {n: i for i, n in enumerate(names)}
    for factor in text.split("*"):
        factor = factor.strip()
        if "^" in factor:
            name, power = factor.split("^")
            power = int(power)
        else:
            name, power = factor, 1
        if name not in index:
            raise StructuralError(f"unknown variable {name!r} in monomial {text!r}")
        exp[index[name]] += power
    return tuple(exp)


class Poly:
    __slots__ = ("names", "terms", "_hash")

    def __init__(self, names: Sequence[str], terms: Mapping[Exponent, object] | None = None):
        self.names = tuple(names)
        clean: Dict[Exponent, object] = {}
        if terms:
            n = len(self.names)
            for e, c in terms.items():
                if len(e) != n:
                    raise StructuralError(f"exponent {e} does not match variables {self.names}")
                if c:
                    clean[tuple(e)] = norm_coeff(c)
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def _raw(cls, names, terms):
        p = cls.__new__(cls)
        p.names = names
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, names):
        return cls._raw(tuple(names), {})

    @classmethod
    def const(cls, names, c):
        names = tuple(names)
        return cls._raw(names, {(0,) * len(names): norm_coeff(c)} if c else {})

    @classmethod
    def one(cls, names):
        return cls.const(names, 1)

    @classmethod
    def var(cls, names, name, power=1):
        names = tuple(names)
        if name not in names:
            raise StructuralError(f"unknown variable {name!r}")
        e = [0] * len(names)
        e[names.index(name)] = power
        return cls._raw(names, {tuple(e): 1})

    @classmethod
    def monomial(cls, names, exp, coeff=1):
        return cls(names, {tuple(exp): coeff})

    # -- basic queries ------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.names)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, 0)

    def coefficient(self, exp: Exponent):
        return self.terms.get(tuple(exp), 0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, var) -> int:
        i = self._index(var)
        return max((e[i] for e in self.terms), default=-1)

    def degrees(self) -> Tuple[int, ...]:
        return tuple(max((e[i] for e in self.terms), default=0) for i in range(self.nvars))

    def variables_used(self):
        used = set()
        for e in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return tuple(self.names[i] for i in sorted(used))

    def _index(self, var) -> int:
        if isinstance(var, int):
            return var
        try:
            return self.names.index(var)
        except ValueError:
            raise StructuralError(f"unknown variable {var!r}") from None

    def _check(self, other):
        if self.names != other.names:
            raise StructuralError(f"variable mismatch {self.names} vs {other.names}")

    def _lift(self, other):
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, Scalar)):
            return Poly.const(self.names, other)
        return None

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in o.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = norm_coeff(v + c)
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Poly._raw(self.names, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.names, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: Dict[Exponent, object] = {}
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                v = out.get(e)
                out[e] = ca * cb if v is None else v + ca * cb
        return Poly._raw(self.names, {e: norm_coeff(c) for e, c in out.items() if c})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c):
        c = norm_coeff(c)
        if not c:
            return Poly.zero(self.names)
        if c == 1:
            return self
        return Poly._raw(self.names, {e: norm_coeff(v * c) for e, v in self.terms.items()})

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            if not other:
                raise ZeroDivisionError("polynomial division by zero")
            inv = Fraction(1) / other if not isinstance(other, Scalar) else Scalar(1) / other
            return self.scale(inv)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = Poly.one(self.names)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.names == other.names and self.terms == other.terms
        if isinstance(other, (int, Fraction, Scalar)):
            if not other:
                return not self.terms
            return self.terms == {(0,) * self.nvars: norm_coeff(other)}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.names, frozenset(self.terms.items())))
        return self._hash

    # -- division -----------------------------------------------------
    def leading(self):
        """Lex-leading (exponent, coefficient)."""
        e = max(self.terms)
        return e, self.terms[e]

    def exact_quotient(self, divisor: "Poly"):
        """Return q with ``self == q*divisor`` or None when not divisible."""
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return self
        le, lc = divisor.leading()
        rem = dict(self.terms)
        quot: Dict[Exponent, object] = {}
        div_terms = list(divisor.terms.items())
        while rem:
            e = max(rem)
            if any(x < y for x, y in zip(e, le)):
                return None
            c = rem[e]
            if isinstance(lc, int) and isinstance(c, int):
                qc = norm_coeff(Fraction(c, lc))
            else:
                qc = norm_coeff(c / lc)
            qe = tuple(x - y for x, y in zip(e, le))
            quot[qe] = qc
            for de, dc in div_terms:
                t = tuple(x + y for x, y in zip(qe, de))
                v = rem.get(t, 0) - qc * dc
                v = norm_coeff(v)
                if v:
                    rem[t] = v
                else:
                    rem.pop(t, None)
        return Poly._raw(self.names, quot)

    # -- content / normalisation ---------------------------------------
    def primitive(self):
        """Split ``self = c * p`` with p having coprime integer coefficients and a
        positive coefficient at its smallest exponent.  Only for rational polys."""
        if self.is_zero():
            return 0, self
        dens, nums = 1, 0
        for c in self.terms.values():
            if isinstance(c, Scalar):
                return 1, self
            c = Fraction(c)
            dens = dens * c.denominator // gcd(dens, c.denominator)
        for c in self.terms.values():
            nums = gcd(nums, int(Fraction(c) * dens))
        first = self.terms[min(self.terms)]
        sign = 1 if first > 0 else -1
        content = Fraction(sign * nums, dens)
        return norm_coeff(content), self.scale(1 / content)

    # -- substitution ---------------------------------------------------
    def substitute(self, values: Mapping[str, object]) -> "Poly":
        """Substitute numbers or polynomials (over the same names) for variables."""
        idx = {self._index(k): v for k, v in values.items()}
        out = Poly.zero(self.names)
        cache: Dict[Tuple[int, int], object] = {}

        def power(i, k):
            key = (i, k)
            if key not in cache:
                v = idx[i]
                cache[key] = v ** k if not isinstance(v, Poly) else v ** k
            return cache[key]

        acc: Dict[Exponent, object] = {}
        for e, c in self.terms.items():
            coeff = c
            rest = list(e)
            poly_factor = None
            for i, v in idx.items():
                k = e[i]
                rest[i] = 0
                if not k:
                    continue
                pv = power(i, k)
                if isinstance(pv, Poly):
                    poly_factor = pv if poly_factor is None else poly_factor * pv
                else:
                    coeff = coeff * pv
            if poly_factor is None:
                t = tuple(rest)
                v = acc.get(t, 0) + coeff
                acc[t] = v
            else:
                out = out + Poly._raw(self.names, {tuple(rest): norm_coeff(coeff)}) * poly_factor
        return out + Poly(self.names, acc)

    def evaluate(self, values: Mapping[str, object]):
        """Full evaluation to a number."""
        p = self.substitute(values)
        if not p.is_constant():
            raise StructuralError(f"evaluation left variables {p.variables_used()}")
        return p.constant_term()

    def extend(self, names: Sequence[str]) -> "Poly":
        """Re-express over a list of names containing all variables used."""
        names = tuple(names)
        if names == self.names:
            return self
        pos = []
        for i, n in enumerate(self.names):
            if n in names:
                pos.append(names.index(n))
            else:
                pos.append(None)
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(names)
            for i, k in enumerate(e):
                if k:
                    if pos[i] is None:
                        raise StructuralError(f"variable {self.names[i]!r} not in target names")
                    ne[pos[i]] += k
            out[tuple(ne)] = c
        return Poly._raw(names, out)

    def map_coeffs(self, fn) -> "Poly":
        return Poly(self.names, {e: fn(c) for e, c in self.terms.items()})

    def truncate(self, bounds: Sequence[int]) -> "Poly":
        return Poly._raw(self.names, {e: c for e, c in self.terms.items()
                                      if all(k <= b for k, b in zip(e, bounds))})

    # -- text -----------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for e in sorted(self.terms, key=lambda e: (sum(e), tuple(-x for x in e))):
            c = self.terms[e]
            mono = format_monomial(e, self.names)
            if isinstance(c, Scalar):
                cs = f"({format_scalar(c)})"
                out.append(("+", cs if mono == "1" else f"{cs}*{mono}"))
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if mono == "1":
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            out.append((sign, body))
        text = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"Poly({str(self)!r}, names={self.names})"


def poly_sum(items: Iterable[Poly], names) -> Poly:
    out = Poly.zero(names)
    for p in items:
        out = out + p
    return out
