"""Quantum cohomology on the smoothing side: Gr(2, n) by quantum Pieri and
rim hooks, Fl(1,2,3) from its divisor matrices."""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import linalg
from .algebra.poly import Poly, norm_coeff
from .algebra.rational import RationalFunction
from .errors import StructuralError
from .graded_ring import GradedRing, QuantumMatrix, change_basis

__all__ = [
    "schubert_basis", "classical_product", "rim_hook_reduce", "gr2n_quantum_product",
    "gr2n_quantum_ring", "ring_from_divisor_matrices", "fl123_quantum_ring",
    "gr24_basis_ring", "gr25_schubert_ring", "divisor_matrix",
]

Shape = Tuple[int, int]


GR25_ORDER: List[Shape] = [(0, 0), (1, 0), (1, 1), (2, 0), (2, 1), (3, 0), (3, 1), (2, 2),
                           (3, 2), (3, 3)]


def schubert_basis(n: int) -> List[Shape]:
    """Pairs (a1, a2) with n-2 >= a1 >= a2 >= 0, sorted by degree then a1."""
    shapes = [(a, b) for a in range(n - 1) for b in range(a + 1)]
    return sorted(shapes, key=lambda s: (s[0] + s[1], s[0]))


def _check(n: int, s: Shape) -> None:
    a, b = s
    if not (n - 2 >= a >= b >= 0):
        raise StructuralError(f"({a},{b}) is not a Schubert index for Gr(2,{n})")


def classical_product(x: Shape, y: Shape) -> Dict[Shape, int]:
    """Littlewood-Richardson product of two-row Schur polynomials in two variables."""
    # s_(a,b) = (x1 x2)^b s_(a-b, 0); h_p h_r = sum_{j=0}^{min} s_(p+r-j, j)
    a1, a2 = x
    b1, b2 = y
    shift = a2 + b2
    p, r = a1 - a2, b1 - b2
    out: Dict[Shape, int] = {}
    for j in range(min(p, r) + 1):
        s = (p + r - j + shift, j + shift)
        out[s] = out.get(s, 0) + 1
    return out


def rim_hook_reduce(n: int, shape: Shape) -> Optional[Tuple[int, int, Shape]]:
    """Reduce a two-row shape into the 2 x (n-2) box by removing n-rim hooks.

    Returns (sign, q-power, shape) or None when the class vanishes.
    """
    sign, power = 1, 0
    a, b = shape
    while a > n - 2:
        if a - n >= b:
            # hook inside the first row, height one
            a, b = a - n, b
            sign = -sign
        else:
            # hook through both rows
            na, nb = b - 1, a + 1 - n
            if nb < 0 or na < nb:
                return None
            a, b = na, nb
        power += 1
    return sign, power, (a, b)


def gr2n_quantum_product(n: int, x: Shape, y: Shape) -> Dict[Shape, Poly]:
    """Quantum product of two Schubert classes of Gr(2, n); values are polynomials in q."""
    _check(n, x)
    _check(n, y)
    names = ("q",)
    out: Dict[Shape, Poly] = {}
    for s, c in classical_product(x, y).items():
        red = rim_hook_reduce(n, s)
        if red is None:
            continue
        sign, power, t = red
        term = Poly(names, {(power,): sign * c})
        out[t] = out[t] + term if t in out else term
    return {s: p for s, p in out.items() if not p.is_zero()}


def _shape_name(s: Shape) -> str:
    return f"w{s[0]}{s[1]}"


def gr2n_quantum_ring(n: int, order: Optional[Sequence[Shape]] = None) -> GradedRing:
    """Small quantum cohomology of Gr(2, n) in the Schubert basis."""
    basis = list(order) if order is not None else schubert_basis(n)
    if sorted(basis) != sorted(schubert_basis(n)):
        raise StructuralError(f"{basis} is not an ordering of the Schubert basis of Gr(2,{n})")
    idx = {s: i for i, s in enumerate(basis)}
    dim = len(basis)
    names = ("q",)
    mult = []
    for x in basis:
        m = linalg.zeros(dim, dim)
        for j, y in enumerate(basis):
            for s, p in gr2n_quantum_product(n, x, y).items():
                m[idx[s]][j] = RationalFunction.from_poly(p)
        mult.append(m)
    pairing = linalg.zeros(dim, dim)
    for s in basis:
        pairing[idx[s]][idx[(n - 2 - s[1], n - 2 - s[0])]] = 1
    return GradedRing([_shape_name(s) for s in basis], [2 * (a + b) for a, b in basis], mult,
                      pairing, 0, names, {"q": 2 * n})


def divisor_matrix(ring: GradedRing, vector: Sequence[object], element: str) -> QuantumMatrix:
    entries = [[x if x else 0 for x in row] for row in ring.matrix_of(vector)]
    return QuantumMatrix(list(ring.names), element, entries, tuple(ring.variables))


def gr24_basis_ring() -> Tuple[GradedRing, Dict[str, list]]:
    """Gr(2,4) in the basis 1, d, d^2, d^2-2 delta, d^3, d^4 (d = w10, delta = w11).

    Returns the ring and the coordinate vectors of d and delta.
    """
    ring = gr2n_quantum_ring(4)
    cl = ring.classical_limit()
    i = {nm: k for k, nm in enumerate(ring.names)}
    d = ring.basis_vector(i["w10"])
    delta = ring.basis_vector(i["w11"])
    d2 = cl.product(d, d)
    d3 = cl.product(d2, d)
    d4 = cl.product(d3, d)
    vecs = [ring.basis_vector(0), d, d2, [x - 2 * y for x, y in zip(d2, delta)], d3, d4]
    names = ["1", "d", "d^2", "d^2-2*delta", "d^3", "d^4"]
    new = change_basis(ring, vecs, names)
    coords = {"d": new.basis_vector(1),
              "delta": [norm_coeff(x) for x in linalg.solve(linalg.transpose(vecs), delta)]}
    return new, coords


def gr25_schubert_ring() -> GradedRing:
    """Gr(2,5) in the Schubert basis w00, w10, w11, w20, w21, w30, w31, w22, w32, w33."""
    return gr2n_quantum_ring(5, GR25_ORDER)


# ---------------------------------------------------------------------------
# rings from divisor matrices


def ring_from_divisor_matrices(names: Sequence[str], degrees: Sequence[int],
                               matrices: Dict[int, List[List[object]]], pairing,
                               variables: Sequence[str], novikov_degrees: Dict[str, int],
                               unit: int = 0) -> GradedRing:
    """Full product table of a ring generated by divisors, from their matrices.

    ``matrices`` maps the basis index of each divisor to its multiplication
    matrix.  Novikov variables must have positive degree: then p * e_c equals
    its classical part plus lower-degree terms, and the operators of
    each degree follow from those of the previous one.
    """
    n = len(names)
    if any(d <= 0 for d in novikov_degrees.values()):
        raise StructuralError("degree recursion needs Novikov variables of positive degree")
    zero = RationalFunction.zero(tuple(variables))

    def rf(x):
        if isinstance(x, RationalFunction):
            return x
        return RationalFunction.const(tuple(variables), x)

    mats = {j: [[rf(x) for x in row] for row in m] for j, m in matrices.items()}
    ops: Dict[int, list] = {unit: [[rf(1 if r == c else 0) for c in range(n)] for r in range(n)]}
    for j, m in mats.items():
        ops[j] = m
    for deg in sorted(set(degrees)):
        todo = [a for a in range(n) if degrees[a] == deg and a not in ops]
        if not todo:
            continue
        rows = []
        for j in mats:
            for c in ops:
                if degrees[c] == deg - 2:
                    col = [mats[j][k][c] for k in range(n)]
                    classical = [col[a].evaluate({v: 0 for v in variables}) if not col[a].is_zero()
                                 else 0 for a in todo]
                    rows.append((j, c, classical))
        chosen = []
        for j, c, cl in rows:
            if linalg.rank([x[2] for x in chosen] + [cl]) > len(chosen):
                chosen.append((j, c, cl))
            if len(chosen) == len(todo):
                break
        if len(chosen) < len(todo):
            raise StructuralError(f"divisors do not generate degree {deg}")
        inv = linalg.inverse([cl for _, _, cl in chosen])
        # p_j * e_c = sum_a cl[a] e_a + sum_{k known} col[k] e_k
        rhs = []
        for j, c, _ in chosen:
            acc = linalg.matmul(mats[j], ops[c])
            col = [mats[j][k][c] for k in range(n)]
            for k in range(n):
                if k in ops and not col[k].is_zero() and k not in todo:
                    acc = [[x - col[k] * y for x, y in zip(r1, r2)] for r1, r2 in zip(acc, ops[k])]
            rhs.append(acc)
        for t, a in enumerate(todo):
            m = [[zero for _ in range(n)] for _ in range(n)]
            for s in range(len(chosen)):
                w = inv[t][s]
                if w:
                    m = [[x + w * y for x, y in zip(r1, r2)] for r1, r2 in zip(m, rhs[s])]
            ops[a] = m
    if len(ops) != n:
        raise StructuralError("divisor matrices do not generate the ring")
    mult = [[[e if not e.is_zero() else 0 for e in row] for row in ops[a]] for a in range(n)]
    return GradedRing(names, degrees, mult, pairing, unit, tuple(variables), novikov_degrees)


def fl123_quantum_ring(p1: List[List[object]], p2: List[List[object]]) -> GradedRing:
    """Fl(1,2,3) on the basis 1, p1, p2, p1^2, p2^2, p1^2 p2 from the two divisor matrices."""
    names = ["1", "p1", "p2", "p1^2", "p2^2", "p1^2*p2"]
    degrees = [0, 2, 2, 4, 4, 6]
    pairing = linalg.zeros(6, 6)
    # p1^2 p2 is the point; p1^2 . p2^2 = p1^3 p2 ... = point via p1^2 p2 = p1 p2^2
    for a, b in [(0, 5), (1, 4), (2, 3)]:
        pairing[a][b] = pairing[b][a] = 1
    return ring_from_divisor_matrices(names, degrees, {1: p1, 2: p2}, pairing, ("q1", "q2"),
                                      {"q1": 4, "q2": 4})
