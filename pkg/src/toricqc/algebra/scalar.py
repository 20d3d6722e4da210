"""Gaussian rationals Q(i).

Most of the package works over plain :class:`fractions.Fraction`; a
:class:`Scalar` only appears where the imaginary unit is genuinely needed.
The two interoperate, so generic code never has to care which one it holds.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

__all__ = ["Scalar", "I", "to_scalar", "parse_scalar", "format_scalar", "simplify"]


def _q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {x!r} to an exact rational")


class Scalar:
    """An element ``re + im*i`` of Q(i), immutable."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _q(re))
        object.__setattr__(self, "im", _q(im))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @staticmethod
    def _coerce(other):
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Fraction, Rational)):
            return Scalar(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return self * Scalar(o.re / n, -o.im / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return Scalar(1) / (self ** (-n))
        out, base = Scalar(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self):
        return Scalar(self.re, -self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


I = Scalar(0, 1)


def to_scalar(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    return Scalar(x)


def simplify(x):
    """Demote a real Scalar to Fraction; leave everything else alone."""
    if isinstance(x, Scalar) and x.im == 0:
        return x.re
    return x


def format_scalar(x) -> str:
    """Lossless text form: ``a/b`` or ``a/b+c/d*i``."""
    if isinstance(x, Scalar):
        if x.im == 0:
            return str(x.re)
        im = x.im
        if x.re == 0:
            return f"{im}*i"
        sign = "+" if im > 0 else "-"
        return f"{x.re}{sign}{abs(im)}*i"
    return str(_q(x))


def parse_scalar(text: str):
    """Inverse of :func:`format_scalar`; returns a Fraction when real."""
    text = text.replace(" ", "")
    if text == "i":
        return I
    if not text.endswith("*i"):
        return Fraction(text)
    body = text[:-2]
    cut = max(body.rfind("+", 1), body.rfind("-", 1))
    if cut <= 0:
        return Scalar(0, Fraction(body))
    return Scalar(Fraction(body[:cut]), Fraction(body[cut:]))
