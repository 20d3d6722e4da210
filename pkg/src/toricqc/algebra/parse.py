"""Reader for the small expression language used by fixture files.

Accepted: integers, ``a/b`` rationals, the imaginary unit ``i``, variable
names, ``+ - * / ^`` and parentheses.  Division by a product of polynomials
keeps each polynomial as its own denominator factor, so
``q2*q3/((1-q2)*(1-q2-q3))`` round-trips through :class:`RationalFunction`.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Sequence

from ..errors import StructuralError
from .poly import Poly
from .rational import RationalFunction
from .scalar import I

__all__ = ["parse_expression", "parse_poly", "parse_rational"]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text: str) -> List[str]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        tok = m.group(1) or m.group(2) or m.group(3)
        if tok is not None and not tok.isspace():
            out.append(tok)
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.text = text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise StructuralError(f"parse error in {self.text!r} near token {self.i}: {tok!r}")
        self.i += 1
        return tok

    def expr(self):
        node = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            node = ("add" if op == "+" else "sub", node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()
            node = ("mul" if op == "*" else "div", node, self.unary())
        return node

    def unary(self):
        if self.peek() == "-":
            self.take()
            return ("neg", self.unary())
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek() == "^":
            self.take()
            node = ("pow", node, int(self.take()))
        return node

    def atom(self):
        tok = self.take()
        if tok == "(":
            node = self.expr()
            self.take(")")
            return node
        if tok.isdigit():
            return ("num", Fraction(int(tok)))
        if tok == "i":
            return ("i",)
        if re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", tok):
            return ("var", tok)
        raise StructuralError(f"unexpected token {tok!r} in {self.text!r}")


def _eval(node, names) -> RationalFunction:
    kind = node[0]
    if kind == "num":
        return RationalFunction.const(names, node[1])
    if kind == "i":
        return RationalFunction.const(names, I)
    if kind == "var":
        if node[1] not in names:
            raise StructuralError(f"unknown variable {node[1]!r}; expected one of {names}")
        return RationalFunction.from_poly(Poly.var(names, node[1]))
    if kind == "neg":
        return -_eval(node[1], names)
    if kind == "add":
        return _eval(node[1], names) + _eval(node[2], names)
    if kind == "sub":
        return _eval(node[1], names) - _eval(node[2], names)
    if kind == "mul":
        return _eval(node[1], names) * _eval(node[2], names)
    if kind == "pow":
        return _eval(node[1], names) ** node[2]
    if kind == "div":
        num = _eval(node[1], names)
        factors = []
        scale = RationalFunction.const(names, 1)
        for sub, mult in _factors(node[2]):
            r = _eval(sub, names)
            if r.is_constant():
                scale = scale * r.constant_value() ** mult
            elif r.is_polynomial():
                factors.append((r.num, mult))
            else:
                for _ in range(mult):
                    num = num * RationalFunction.from_poly(r.denominator())
                    factors.append((r.num, 1))
        if scale.constant_value() == 0:
            raise ZeroDivisionError("division by zero in expression")
        out = RationalFunction(num.num, list(num.den) + factors)
        return out / scale.constant_value() if scale.constant_value() != 1 else out
    raise StructuralError(f"bad node {node!r}")


def _factors(node, mult=1):
    if node[0] == "mul":
        return _factors(node[1], mult) + _factors(node[2], mult)
    if node[0] == "pow":
        return _factors(node[1], mult * node[2])
    return [(node, mult)]


def parse_expression(text: str, names: Sequence[str]) -> RationalFunction:
    p = _Parser(text)
    node = p.expr()
    if p.peek() is not None:
        raise StructuralError(f"trailing input in {text!r}")
    return _eval(node, tuple(names))


def parse_poly(text: str, names: Sequence[str]) -> Poly:
    r = parse_expression(text, names)
    if not r.is_polynomial():
        raise StructuralError(f"{text!r} is not a polynomial")
    return r.num


def _top_level_split(text: str, sep: str):
    depth = 0
    for k, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and text.startswith(sep, k):
            return text[:k], text[k + len(sep):]
    return text, None


def parse_rational(text: str, names: Sequence[str]) -> RationalFunction:
    """Read the serialized form ``num / (f)^a*(g)^b`` (note the spaced slash).

    Anything without a spaced top-level slash is read as a plain expression.
    """
    num_text, den_text = _top_level_split(text.strip(), " / ")
    if den_text is None:
        return parse_expression(text, names)
    num = parse_expression(num_text, names)
    p = _Parser(den_text)
    node = p.term()
    if p.peek() is not None:
        raise StructuralError(f"trailing input in denominator of {text!r}")
    factors = []
    for sub, mult in _factors(node):
        factors.append((parse_poly_node(sub, names), mult))
    return RationalFunction(num.num, list(num.den) + factors)


def parse_poly_node(node, names) -> Poly:
    r = _eval(node, tuple(names))
    if not r.is_polynomial():
        raise StructuralError("denominator factor is not a polynomial")
    return r.num
