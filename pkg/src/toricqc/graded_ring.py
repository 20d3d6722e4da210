"""Finite-dimensional graded commutative rings with a fixed ordered basis.

A ring stores one multiplication matrix per basis element: column ``j`` of
``mult[a]`` is the coordinate vector of ``basis[a] * basis[j]``.  Entries are
plain numbers for classical rings and :class:`RationalFunction` values for
quantum rings.  Degrees are cohomological (a divisor class has degree 2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .algebra import linalg
from .algebra.poly import Poly, norm_coeff
from .algebra.rational import RationalFunction
from .algebra.scalar import format_scalar
from .errors import DegeneratePairing, EvaluationPole, NotClosed, PresentationError, StructuralError

__all__ = [
    "GradedRing", "QuantumMatrix", "Verdict", "ring_from_presentation", "check_frobenius",
    "check_commutativity", "check_unit", "check_grading", "check_pairing", "subquotient",
    "graded_basis", "Presentation", "change_basis", "coordinates_mod",
]


@dataclass
class Verdict:
    ok: bool
    message: str = ""
    witness: object = None

    def __bool__(self):
        return self.ok

    def to_dict(self):
        return {"ok": self.ok, "message": self.message,
                "witness": None if self.witness is None else str(self.witness)}


def _zero(x) -> bool:
    return not x


def _as_rf(x, names):
    if isinstance(x, RationalFunction):
        return x
    return RationalFunction.const(names, x)


def format_entry(x) -> str:
    if isinstance(x, RationalFunction):
        return str(x)
    return format_scalar(x)


class GradedRing:
    """Basis names, degrees, multiplication matrices and a pairing."""

    def __init__(self, names: Sequence[str], degrees: Sequence[int], mult: Sequence[list],
                 pairing: Sequence[Sequence[object]], unit: int = 0,
                 variables: Sequence[str] = (), novikov_degrees: Mapping[str, int] | None = None,
                 polys: Sequence[Poly] | None = None):
        self.names = list(names)
        self.degrees = list(degrees)
        n = len(self.names)
        if len(self.degrees) != n or len(mult) != n:
            raise StructuralError("basis names, degrees and multiplication table disagree in size")
        self.mult = [[list(r) for r in m] for m in mult]
        self.pairing = [list(r) for r in pairing]
        self.unit = unit
        self.variables = tuple(variables)
        self.novikov_degrees = dict(novikov_degrees or {})
        self.polys = list(polys) if polys is not None else None

    @property
    def dim(self) -> int:
        return len(self.names)

    def is_quantum(self) -> bool:
        return bool(self.variables)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def basis_vector(self, i: int) -> list:
        v = [0] * self.dim
        v[i] = 1
        return v

    def product(self, x: Sequence[object], y: Sequence[object]) -> list:
        """Product of coordinate vectors."""
        out = [0] * self.dim
        for a, xa in enumerate(x):
            if _zero(xa):
                continue
            m = self.mult[a]
            for b, yb in enumerate(y):
                if _zero(yb):
                    continue
                c = xa * yb
                for k in range(self.dim):
                    e = m[k][b]
                    if not _zero(e):
                        out[k] = out[k] + c * e
        return [norm_coeff(v) for v in out]

    def matrix_of(self, x: Sequence[object]) -> list:
        """Matrix of multiplication by the element with coordinates x."""
        out = linalg.zeros(self.dim, self.dim)
        for a, xa in enumerate(x):
            if _zero(xa):
                continue
            m = self.mult[a]
            for k in range(self.dim):
                for b in range(self.dim):
                    if not _zero(m[k][b]):
                        out[k][b] = out[k][b] + xa * m[k][b]
        return out

    def pair(self, x: Sequence[object], y: Sequence[object]):
        acc = 0
        for a, xa in enumerate(x):
            if _zero(xa):
                continue
            for b, yb in enumerate(y):
                if not _zero(yb) and self.pairing[a][b]:
                    acc = acc + xa * yb * self.pairing[a][b]
        return norm_coeff(acc)

    def vector_degree(self, v: Sequence[object]) -> Optional[int]:
        """Common degree of the support of v, or None when inhomogeneous or zero."""
        degs = {self.degrees[i] for i, x in enumerate(v) if not _zero(x)}
        return degs.pop() if len(degs) == 1 else None

    def classical_limit(self) -> "GradedRing":
        """Set every Novikov variable to zero."""
        if not self.variables:
            return self
        zero = {v: 0 for v in self.variables}
        mult = [[[_as_rf(e, self.variables).evaluate(zero) if not _zero(e) else 0 for e in row]
                 for row in m] for m in self.mult]
        return GradedRing(self.names, self.degrees, mult, self.pairing, self.unit, (), {},
                          self.polys)

    def evaluate(self, values: Mapping[str, object]) -> "GradedRing":
        """Substitute values for some Novikov variables in every structure constant."""
        rest = tuple(v for v in self.variables if v not in values)
        mult = []
        for m in self.mult:
            rows = []
            for row in m:
                r = []
                for e in row:
                    if _zero(e):
                        r.append(0)
                        continue
                    val = _as_rf(e, self.variables).substitute(values)
                    r.append(_restrict(val, rest))
                rows.append(r)
            mult.append(rows)
        degs = {v: d for v, d in self.novikov_degrees.items() if v in rest}
        return GradedRing(self.names, self.degrees, mult, self.pairing, self.unit, rest, degs,
                          self.polys)

    def to_dict(self) -> dict:
        return {
            "basis": self.names,
            "degrees": self.degrees,
            "variables": list(self.variables),
            "novikov_degrees": self.novikov_degrees,
            "unit": self.unit,
            "mult": [[[format_entry(e) for e in row] for row in m] for m in self.mult],
            "pairing": [[format_scalar(e) for e in row] for row in self.pairing],
        }


def _restrict(val: RationalFunction, names: Tuple[str, ...]):
    """Move a rational function into fewer variables (those substituted away)."""
    if not names:
        return val.constant_value()
    if val.names == names:
        return val
    return RationalFunction(_project(val.num, names), [(_project(f, names), m) for f, m in val.den])


def _project(p: Poly, names: Tuple[str, ...]) -> Poly:
    keep = [p.names.index(n) for n in names]
    out = {}
    for e, c in p.terms.items():
        if any(k for i, k in enumerate(e) if i not in keep):
            raise StructuralError(f"polynomial still depends on removed variables: {p}")
        out[tuple(e[i] for i in keep)] = c
    return Poly(names, out)


@dataclass
class QuantumMatrix:
    """Matrix of quantum multiplication by ``element`` in a fixed basis."""
    basis: List[str]
    element: str
    entries: List[List[object]]
    variables: Tuple[str, ...] = ()

    def to_dict(self):
        return {"element": self.element, "basis": self.basis, "variables": list(self.variables),
                "entries": [[format_entry(e) for e in row] for row in self.entries]}


# ---------------------------------------------------------------------------
# presentations


@dataclass
class Presentation:
    """Normal-form machinery for Q[gens]/(relations) with a chosen basis."""
    generators: Tuple[str, ...]
    basis: List[Poly]
    top: int
    projections: Dict[int, Tuple[List[Tuple[int, ...]], list]] = field(default_factory=dict)

    def normal_form(self, f: Poly) -> list:
        """Coordinates of f in the chosen basis."""
        out = [0] * len(self.basis)
        parts: Dict[int, Dict[Tuple[int, ...], object]] = {}
        for e, c in f.terms.items():
            parts.setdefault(sum(e), {})[e] = c
        for p, terms in parts.items():
            if p > self.top:
                continue
            monos, proj = self.projections[p]
            idx = {m: i for i, m in enumerate(monos)}
            vec = [0] * len(monos)
            for e, c in terms.items():
                vec[idx[e]] = c
            coords = linalg.matvec(proj[1], vec)
            for k, c in zip(proj[0], coords):
                out[k] = norm_coeff(out[k] + c)
        return out


def _monomials(nvars: int, degree: int) -> List[Tuple[int, ...]]:
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


def _presentation(generators: Sequence[str], relations: Sequence[Poly], basis: Sequence[Poly]
                  ) -> Presentation:
    gens = tuple(generators)
    nv = len(gens)
    basis = [b.extend(gens) for b in basis]
    relations = [r.extend(gens) for r in relations if not r.is_zero()]
    bdeg = []
    for b in basis:
        degs = {sum(e) for e in b.terms}
        if len(degs) != 1:
            raise PresentationError(f"basis element {b} is not homogeneous")
        bdeg.append(degs.pop())
    for r in relations:
        if len({sum(e) for e in r.terms}) != 1:
            raise PresentationError(f"relation {r} is not homogeneous")
    top = max(bdeg)
    pres = Presentation(gens, basis, top)
    for p in range(top + 2):
        monos = _monomials(nv, p)
        idx = {m: i for i, m in enumerate(monos)}
        ideal = []
        for r in relations:
            rd = sum(next(iter(r.terms)))
            if rd > p:
                continue
            for mono in _monomials(nv, p - rd):
                v = [0] * len(monos)
                for e, c in r.terms.items():
                    t = tuple(a + b for a, b in zip(e, mono))
                    v[idx[t]] = norm_coeff(v[idx[t]] + c)
                ideal.append(v)
        ideal = linalg.span_basis(ideal)
        chosen = [k for k, d in enumerate(bdeg) if d == p]
        bvecs = []
        for k in chosen:
            v = [0] * len(monos)
            for e, c in basis[k].terms.items():
                v[idx[e]] = c
            bvecs.append(v)
        complement = len(bvecs) + len(ideal) == len(monos) and \
            linalg.rank(bvecs + ideal) == len(monos)
        if monos and not complement:
            raise PresentationError(
                f"basis does not give a complement of the relation ideal in degree {2 * p} "
                f"({len(bvecs)} basis elements, quotient has dimension {len(monos) - len(ideal)})",
                degree=2 * p)
        if p == top + 1:
            break
        square = linalg.transpose(bvecs + ideal)
        inv = linalg.inverse(square) if square else []
        proj = inv[:len(bvecs)]
        pres.projections[p] = (monos, (chosen, proj))
    return pres


def ring_from_presentation(generators: Sequence[str], relations: Sequence[Poly],
                           basis: Sequence[Poly], names: Sequence[str] | None = None,
                           normalization: Tuple[Poly, object] | None = None
                           ) -> Tuple[GradedRing, Presentation]:
    """Classical ring Q[generators]/(relations) on the given basis.

    ``normalization`` is a pair (top-degree polynomial, its integral); the
    Poincare pairing is derived from it.  Without it the pairing is left
    as the zero matrix.
    """
    pres = _presentation(generators, relations, basis)
    n = len(pres.basis)
    names = list(names) if names is not None else [str(b).replace(" ", "") for b in pres.basis]
    degrees = [2 * sum(next(iter(b.terms))) for b in pres.basis]
    mult = []
    for a in range(n):
        cols = [pres.normal_form(pres.basis[a] * pres.basis[b]) for b in range(n)]
        mult.append(linalg.transpose(cols))
    unit = next((i for i, b in enumerate(pres.basis) if b == 1), None)
    if unit is None:
        raise PresentationError("basis must contain the unit 1", degree=0)
    if normalization is not None:
        top = [k for k, b in enumerate(pres.basis) if 2 * pres.top == degrees[k]]
        if len(top) != 1:
            raise PresentationError("top degree piece must be one-dimensional", degree=2 * pres.top)
        t = top[0]
        poly, value = normalization
        c = pres.normal_form(poly.extend(pres.generators))[t]
        if not c:
            raise PresentationError(f"normalization class {poly} vanishes in the quotient",
                                    degree=2 * pres.top)
        vol = norm_coeff(Fraction(value) / c if isinstance(c, int) else value / c)
        pairing = [[norm_coeff(pres.normal_form(pres.basis[a] * pres.basis[b])[t] * vol)
                    for b in range(n)] for a in range(n)]
    else:
        pairing = linalg.zeros(n, n)
    return GradedRing(names, degrees, mult, pairing, unit, polys=pres.basis), pres


# ---------------------------------------------------------------------------
# verdicts


def check_unit(ring: GradedRing) -> Verdict:
    m = ring.mult[ring.unit]
    for i in range(ring.dim):
        for k in range(ring.dim):
            want = 1 if i == k else 0
            if m[k][i] != want:
                return Verdict(False, "unit law fails", (ring.names[i], ring.names[k], m[k][i]))
    return Verdict(True, "unit law holds")


def check_commutativity(ring: GradedRing) -> Verdict:
    for a in range(ring.dim):
        for b in range(a + 1, ring.dim):
            for k in range(ring.dim):
                if ring.mult[a][k][b] != ring.mult[b][k][a]:
                    return Verdict(False, "products do not commute",
                                   (ring.names[a], ring.names[b], ring.names[k]))
    return Verdict(True, "commutative")


def check_frobenius(ring: GradedRing) -> Verdict:
    """(a*b, c) = (a, b*c) for every basis triple."""
    n = ring.dim
    cols = [[[ring.mult[a][k][b] for k in range(n)] for b in range(n)] for a in range(n)]
    for a in range(n):
        for b in range(n):
            ab = cols[a][b]
            for c in range(n):
                lhs = ring.pair(ab, ring.basis_vector(c))
                rhs = ring.pair(ring.basis_vector(a), cols[b][c])
                if lhs != rhs:
                    return Verdict(False, "Frobenius property fails",
                                   (ring.names[a], ring.names[b], ring.names[c], lhs, rhs))
    return Verdict(True, f"Frobenius property holds on all {n ** 3} triples")


def check_pairing(ring: GradedRing) -> Verdict:
    n = ring.dim
    for a in range(n):
        for b in range(n):
            if ring.pairing[a][b] != ring.pairing[b][a]:
                return Verdict(False, "pairing is not symmetric", (ring.names[a], ring.names[b]))
    top = max(ring.degrees)
    for a in range(n):
        for b in range(n):
            if ring.pairing[a][b] and ring.degrees[a] + ring.degrees[b] != top:
                return Verdict(False, "pairing couples non-complementary degrees",
                               (ring.names[a], ring.names[b]))
    if linalg.det(ring.pairing) == 0:
        return Verdict(False, "pairing is degenerate")
    return Verdict(True, "pairing symmetric, complementary and nondegenerate")


def _monomial_degree(e, ring: GradedRing) -> int:
    return sum(k * ring.novikov_degrees.get(v, 0) for k, v in zip(e, ring.variables))


def check_grading(ring: GradedRing) -> Verdict:
    """Every structure constant is homogeneous of the expected degree."""
    for a in range(ring.dim):
        for k in range(ring.dim):
            for b in range(ring.dim):
                e = ring.mult[a][k][b]
                if _zero(e):
                    continue
                want = ring.degrees[a] + ring.degrees[b] - ring.degrees[k]
                if not isinstance(e, RationalFunction):
                    if want != 0:
                        return Verdict(False, "constant structure constant in wrong degree",
                                       (ring.names[a], ring.names[b], ring.names[k]))
                    continue
                degs = {_monomial_degree(m, ring) for m in e.num.terms}
                for f, _ in e.den:
                    fd = {_monomial_degree(m, ring) for m in f.terms}
                    if fd != {0}:
                        return Verdict(False, "denominator is not of degree zero",
                                       (ring.names[a], ring.names[b], str(f)))
                if degs != {want}:
                    return Verdict(False, "structure constant has wrong degree",
                                   (ring.names[a], ring.names[b], ring.names[k], str(e), want))
    return Verdict(True, "all structure constants homogeneous")


# ---------------------------------------------------------------------------
# subspaces and subquotients


def graded_basis(space: Sequence[Sequence[object]], degrees: Sequence[int]) -> List[list]:
    """Homogeneous basis of a graded subspace given by any spanning list."""
    out = []
    for d in sorted(set(degrees)):
        piece = [[1 if (i == j) else 0 for i in range(len(degrees))]
                 for j in range(len(degrees)) if degrees[j] == d]
        out.extend(linalg.intersect(space, piece))
    return out


def _split_by_monomial(v: Sequence[object], names) -> Dict[tuple, list]:
    """Write a vector of polynomials as a sum over q-monomials of scalar vectors."""
    out: Dict[tuple, list] = {}
    for i, x in enumerate(v):
        if _zero(x):
            continue
        if isinstance(x, RationalFunction):
            if x.den:
                raise EvaluationPole(f"entry {x} is not a polynomial after evaluation")
            for e, c in x.num.terms.items():
                out.setdefault(e, [0] * len(v))[i] = c
        else:
            out.setdefault((0,) * len(names), [0] * len(v))[i] = x
    return out


def coordinates_mod(v: Sequence[object], basis: Sequence[Sequence[object]],
                    kernel: Sequence[Sequence[object]], names) -> Optional[list]:
    """Coordinates of v in ``basis`` modulo span(kernel); entries may be polynomials.

    Returns None when v is not in span(basis) + span(kernel).
    """
    pieces = _split_by_monomial(v, names)
    cols = [list(b) for b in basis] + [list(k) for k in kernel]
    a = linalg.transpose(cols) if cols else []
    coords = [RationalFunction.zero(names) if names else 0 for _ in basis]
    for e, vec in pieces.items():
        if not cols:
            return None
        sol = linalg.solve(a, vec)
        if sol is None:
            return None
        for i in range(len(basis)):
            if sol[i]:
                if names:
                    coords[i] = coords[i] + RationalFunction.from_poly(Poly(names, {e: sol[i]}))
                else:
                    coords[i] = norm_coeff(coords[i] + sol[i])
    return coords


def subquotient(ring: GradedRing, V: Sequence[Sequence[object]], W: Sequence[Sequence[object]],
                evaluation: Mapping[str, object] | None = None,
                names: Sequence[str] | None = None) -> Tuple[GradedRing, List[list]]:
    """Ring structure induced on V/W, after evaluating Novikov variables.

    Returns the quotient ring and the list of lifts (vectors of V) used as its basis.
    """
    evaluation = dict(evaluation or {})
    rest = tuple(v for v in ring.variables if v not in evaluation)
    W = [list(w) for w in W]
    for w in W:
        if not linalg.in_span(w, V):
            raise NotClosed("W is not contained in V", witness=w)
    lifts = []
    for v in V:
        if not linalg.in_span(v, lifts + W):
            lifts.append(list(v))
    n = len(lifts)
    ndeg = {v: d for v, d in ring.novikov_degrees.items() if v in rest}
    if n == 0:
        return GradedRing([], [], [], [], 0, rest, ndeg), []
    degrees = []
    for v in lifts:
        d = ring.vector_degree(v)
        if d is None:
            raise StructuralError(f"quotient basis vector {v} is not homogeneous")
        degrees.append(d)
    mult = []
    for a in range(n):
        cols = []
        for b in range(n):
            prod = ring.product(lifts[a], lifts[b])
            if evaluation:
                prod = [_restrict(_as_rf(x, ring.variables).substitute(evaluation), rest)
                        if not _zero(x) else 0 for x in prod]
            coords = coordinates_mod(prod, lifts, W, rest)
            if coords is None:
                raise NotClosed("product leaves V + W",
                                witness=(a, b, [format_entry(x) for x in prod]))
            cols.append(coords)
        mult.append(linalg.transpose(cols))
    pairing = [[ring.pair(lifts[a], lifts[b]) for b in range(n)] for a in range(n)]
    if linalg.det(pairing) == 0:
        raise DegeneratePairing("induced pairing on V/W is degenerate")
    unit_vec = ring.basis_vector(ring.unit)
    unit = next((i for i, v in enumerate(lifts) if v == unit_vec), 0)
    qnames = list(names) if names is not None else [f"v{i}" for i in range(n)]
    return GradedRing(qnames, degrees, mult, pairing, unit, rest, ndeg), lifts


def change_basis(ring: GradedRing, vectors: Sequence[Sequence[object]], names: Sequence[str],
                 polys: Sequence[Poly] | None = None) -> GradedRing:
    """The same ring in the basis f_i = sum_k vectors[i][k] e_k (homogeneous vectors)."""
    p = linalg.transpose([list(v) for v in vectors])
    pinv = linalg.inverse(p)
    if pinv is None:
        raise StructuralError("new basis vectors are linearly dependent")
    degrees = []
    for v in vectors:
        d = ring.vector_degree(v)
        if d is None:
            raise StructuralError(f"basis vector {list(v)} is not homogeneous")
        degrees.append(d)
    mult = []
    for v in vectors:
        m = ring.matrix_of(v)
        mult.append([[norm_coeff(x) if not isinstance(x, RationalFunction) else x for x in row]
                     for row in linalg.matmul(pinv, linalg.matmul(m, p))])
    pairing = [[ring.pair(a, b) for b in vectors] for a in vectors]
    unit_vec = ring.basis_vector(ring.unit)
    unit = next((i for i, v in enumerate(vectors) if list(v) == unit_vec), 0)
    return GradedRing(names, degrees, mult, pairing, unit, ring.variables, ring.novikov_degrees,
                      polys)
