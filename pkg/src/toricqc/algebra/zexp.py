"""Laurent expansions in the formal parameter z with finitely many terms."""

from __future__ import annotations

from typing import Callable, Dict, Mapping

__all__ = ["ZExpansion"]


class ZExpansion:
    """Finite sum of ``c_k z^k`` with k possibly negative.

    Coefficients are any additive values (numbers, ring vectors, series).
    Zero coefficients are dropped using ``bool``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        self.coeffs: Dict[int, object] = {int(k): v for k, v in (coeffs or {}).items() if _nonzero(v)}

    @classmethod
    def constant(cls, value):
        return cls({0: value})

    def __getitem__(self, k: int):
        return self.coeffs.get(k, 0)

    def z0(self):
        return self.coeffs.get(0, 0)

    def lowest(self) -> int | None:
        return min(self.coeffs) if self.coeffs else None

    def highest(self) -> int | None:
        return max(self.coeffs) if self.coeffs else None

    def __add__(self, other: "ZExpansion"):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return ZExpansion(out)

    def __neg__(self):
        return ZExpansion({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def shift(self, n: int) -> "ZExpansion":
        """Multiply by z**n."""
        return ZExpansion({k + n: v for k, v in self.coeffs.items()})

    def mul(self, other: "ZExpansion", op: Callable[[object, object], object]) -> "ZExpansion":
        """Product where coefficients combine through ``op`` (e.g. a ring product)."""
        out: Dict[int, object] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                v = op(a, b)
                out[i + j] = out[i + j] + v if i + j in out else v
        return ZExpansion(out)

    def map(self, fn) -> "ZExpansion":
        return ZExpansion({k: fn(v) for k, v in self.coeffs.items()})

    def truncate_below(self, k: int) -> "ZExpansion":
        return ZExpansion({i: v for i, v in self.coeffs.items() if i >= k})

    def __eq__(self, other):
        if not isinstance(other, ZExpansion):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __repr__(self):
        body = " + ".join(f"({v})*z^{k}" for k, v in sorted(self.coeffs.items()))
        return f"ZExpansion({body or '0'})"


def _nonzero(v) -> bool:
    if isinstance(v, (list, tuple)):
        return any(_nonzero(x) for x in v)
    return bool(v)
