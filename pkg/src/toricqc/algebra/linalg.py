"""Dense exact linear algebra over Q or Q(i).

Matrices are lists of rows.  Vectors are lists.  Nothing here knows about
rings or gradings; subspaces are given by spanning lists of column vectors.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

from .poly import norm_coeff
from .scalar import Scalar

Matrix = List[List[object]]
Vector = List[object]

__all__ = [
    "zeros", "identity", "transpose", "matmul", "matvec", "matpow", "madd", "mscale",
    "is_zero_matrix", "rref", "rank", "nullspace", "column_space", "solve", "in_span",
    "span_basis", "intersect", "subspace_sum", "subspace_equal", "inverse", "det",
]


def _div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return norm_coeff(Fraction(a, b))
    if isinstance(b, int):
        b = Fraction(b)
    return norm_coeff(a / b)


def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(a: Matrix) -> Matrix:
    return [list(r) for r in zip(*a)] if a else []


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    out = []
    for row in a:
        out.append([_dot(row, col) for col in bt])
    return out


def _dot(u, v):
    acc = 0
    for x, y in zip(u, v):
        if x and y:
            acc = acc + x * y
    return norm_coeff(acc)


def matvec(a: Matrix, v: Vector) -> Vector:
    return [_dot(row, v) for row in a]


def madd(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def mscale(c, a: Matrix) -> Matrix:
    return [[c * x for x in r] for r in a]


def matpow(a: Matrix, k: int) -> Matrix:
    out = identity(len(a))
    for _ in range(k):
        out = matmul(out, a)
    return out


def is_zero_matrix(a: Matrix) -> bool:
    return not any(x for r in a for x in r)


def rref(a: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(r) for r in a]
    rows = len(m)
    cols = len(m[0]) if m else 0
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        p = next((i for i in range(r, rows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][c]
        m[r] = [_div(x, pv) for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [norm_coeff(x - f * y) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Matrix) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a)[1])


def nullspace(a: Matrix, ncols: int | None = None) -> List[Vector]:
    """Basis of {x : a x = 0}."""
    if not a:
        n = ncols or 0
        return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    n = len(a[0])
    m, piv = rref(a)
    free = [c for c in range(n) if c not in piv]
    out = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for r, p in enumerate(piv):
            v[p] = norm_coeff(-m[r][f])
        out.append(v)
    return out


def span_basis(vectors: Sequence[Vector]) -> List[Vector]:
    """Echelonized basis (as rows) of the span of ``vectors``."""
    vectors = [list(v) for v in vectors if any(v)]
    if not vectors:
        return []
    m, piv = rref(vectors)
    return [m[i] for i in range(len(piv))]


def column_space(a: Matrix) -> List[Vector]:
    return span_basis(transpose(a))


def in_span(v: Vector, basis: Sequence[Vector]) -> bool:
    if not any(v):
        return True
    if not basis:
        return False
    return rank(list(basis) + [list(v)]) == rank(list(basis))


def solve(a: Matrix, b: Vector):
    """One solution of a x = b or None."""
    n = len(a[0]) if a else 0
    aug = [list(r) + [y] for r, y in zip(a, b)]
    m, piv = rref(aug)
    if n in piv:
        return None
    x = [0] * n
    for r, p in enumerate(piv):
        x[p] = m[r][n]
    return x


def subspace_sum(*spaces: Sequence[Vector]) -> List[Vector]:
    allv = [v for s in spaces for v in s]
    return span_basis(allv)


def intersect(u: Sequence[Vector], w: Sequence[Vector]) -> List[Vector]:
    """Intersection of span(u) and span(w)."""
    u, w = span_basis(u), span_basis(w)
    if not u or not w:
        return []
    dim = len(u[0])
    # solve sum a_i u_i - sum b_j w_j = 0
    cols = [list(v) for v in u] + [[-x for x in v] for v in w]
    ns = nullspace(transpose(cols))
    out = []
    for sol in ns:
        vec = [0] * dim
        for coef, v in zip(sol[:len(u)], u):
            if coef:
                vec = [norm_coeff(x + coef * y) for x, y in zip(vec, v)]
        out.append(vec)
    return span_basis(out)


def subspace_equal(u: Sequence[Vector], w: Sequence[Vector]) -> bool:
    return span_basis(u) == span_basis(w)


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(a)]
    m, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [r[n:] for r in m]


def det(a: Matrix):
    """Determinant by exact Gaussian elimination."""
    n = len(a)
    m = [list(r) for r in a]
    sign = 1
    result = 1
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c]), None)
        if p is None:
            return 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            sign = -sign
        pv = m[c][c]
        result = result * pv
        for i in range(c + 1, n):
            if m[i][c]:
                f = _div(m[i][c], pv)
                m[i] = [norm_coeff(x - f * y) for x, y in zip(m[i], m[c])]
    return norm_coeff(sign * result)


def conjugate_matrix(a: Matrix) -> Matrix:
    return [[x.conjugate() if isinstance(x, Scalar) else x for x in r] for r in a]
