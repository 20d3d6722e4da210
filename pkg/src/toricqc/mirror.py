"""Givental's I-function of a smooth toric variety and the extraction of its
small quantum product.

Everything is evaluated at z = 1.  The I-function is homogeneous of degree 0
(deg z = deg of a divisor = 1 in the half-degree units used here), so the
z-power of a component is recovered from degrees: a class of half-degree p at
q^beta produced by an operator of degree a sits at z^(a - p - c1.beta).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import linalg
from .algebra.poly import Poly, norm_coeff
from .algebra.rational import RationalFunction, rational_from_series
from .algebra.series import TruncatedSeries
from .algebra.zexp import ZExpansion
from .errors import InsufficientTruncation, NoClosedForm, StructuralError
from .graded_ring import GradedRing, Presentation, QuantumMatrix
from .toric import DivisorClassData, intersection_degrees

log = logging.getLogger(__name__)

__all__ = [
    "ToricModel", "IFunction", "Operator", "compute_ifunction", "find_extraction_operators",
    "extract_quantum_matrices", "quantum_ring", "apply_operator", "operator_from_terms",
    "Extraction", "run_extraction", "toric_model", "format_operator", "operator_terms",
]

Beta = Tuple[int, ...]
Vec = List[object]


@dataclass
class ToricModel:
    """Classical data of a smooth toric variety in a chosen nef basis."""
    ring: GradedRing
    presentation: Presentation
    data: DivisorClassData
    exceptional: Tuple[str, ...]
    ansatz: List[Poly]

    @property
    def qnames(self) -> Tuple[str, ...]:
        return tuple(f"q{j + 1}" for j in range(self.data.rank))

    @property
    def c1(self) -> Tuple[int, ...]:
        return self.data.c1

    def half_degrees(self) -> List[int]:
        return [d // 2 for d in self.ring.degrees]

    def class_vector(self, p: Poly) -> Vec:
        return self.presentation.normal_form(p.extend(self.presentation.generators))

    def divisor_matrices(self) -> List[List[List[object]]]:
        """Cup-product matrices of the nef basis m_1..m_r."""
        out = []
        for name in self.data.names:
            v = self.class_vector(Poly.var(self.data.names, name))
            out.append(self.ring.matrix_of(v))
        return out

    def ray_matrices(self) -> List[List[List[object]]]:
        ms = self.divisor_matrices()
        n = self.ring.dim
        out = []
        for row in self.data.a:
            m = linalg.zeros(n, n)
            for j, c in enumerate(row):
                if c:
                    m = linalg.madd(m, linalg.mscale(c, ms[j]))
            out.append(m)
        return out


# ---------------------------------------------------------------------------
# vector-valued series: dict beta -> coordinate vector


def _sparse(m):
    return [[(j, x) for j, x in enumerate(row) if x] for row in m]


def _spmv(sm, v):
    return [norm_coeff(sum((x * v[j] for j, x in row if v[j]), 0)) for row in sm]


def _vadd(u, v, c=1):
    return [norm_coeff(a + c * b) if b else a for a, b in zip(u, v)]


def _vs_add(a: Dict[Beta, Vec], b: Dict[Beta, Vec], c=1) -> Dict[Beta, Vec]:
    out = dict(a)
    for beta, v in b.items():
        out[beta] = _vadd(out[beta], v, c) if beta in out else [norm_coeff(c * x) for x in v]
        if not any(out[beta]):
            del out[beta]
    return out


class IFunction:
    """Conjugated I-function e^{-m log q/z} I at z = 1, one vector per beta."""

    def __init__(self, model: ToricModel, bounds: Sequence[int], terms: Dict[Beta, Vec],
                 max_degree: int):
        self.model = model
        self.bounds = tuple(bounds)
        self.terms = terms
        self.max_degree = max_degree
        self._divisors = [_sparse(m) for m in model.divisor_matrices()]
        self._powers: Dict[Tuple[int, ...], Dict[Beta, Vec]] = {}

    @property
    def names(self):
        return self.model.qnames

    def admissible(self, beta: Beta) -> bool:
        return sum(c * n for c, n in zip(self.model.c1, beta)) <= self.max_degree + 1

    def zexpansion(self, beta: Beta, degree: int = 0) -> ZExpansion:
        """The beta-term split by powers of z (for an operator of the given degree)."""
        v = self.terms.get(tuple(beta))
        if v is None:
            return ZExpansion()
        c1b = sum(c * n for c, n in zip(self.model.c1, beta))
        parts: Dict[int, Vec] = {}
        for k, (x, p) in enumerate(zip(v, self.model.half_degrees())):
            if x:
                s = degree - p - c1b
                parts.setdefault(s, [0] * len(v))[k] = x
        return ZExpansion(parts)

    def zd(self, j: int, series: Dict[Beta, Vec]) -> Dict[Beta, Vec]:
        """Action of z q_j d/dq_j on a conjugated series: q^b v -> q^b (b_j + m_j) v."""
        out = {}
        m = self._divisors[j]
        for beta, v in series.items():
            w = _spmv(m, v)
            if beta[j]:
                w = _vadd(w, v, beta[j])
            if any(w):
                out[beta] = w
        return out

    def power(self, k: Tuple[int, ...]) -> Dict[Beta, Vec]:
        """(zD)^k applied to the I-function, cached."""
        k = tuple(k)
        if k in self._powers:
            return self._powers[k]
        if not any(k):
            res = self.terms
        else:
            j = max(i for i, e in enumerate(k) if e)
            prev = list(k)
            prev[j] -= 1
            res = self.zd(j, self.power(tuple(prev)))
        self._powers[k] = res
        return res


def _geometric(c: int, top: int) -> List[Fraction]:
    """Coefficients of 1/(R + c) as a polynomial in nilpotent R."""
    return [Fraction((-1) ** k, c ** (k + 1)) for k in range(top + 1)]


def _pmul(a, b, top):
    out = [Fraction(0)] * (top + 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b[:top + 1 - i]):
                if y:
                    out[i + j] += x * y
    return out


def gamma_factor(d: int, top: int) -> List[Fraction]:
    """Prod_{c<=0}(R+c) / Prod_{c<=d}(R+c) at z = 1, truncated at R^(top+1)."""
    poly = [Fraction(1)] + [Fraction(0)] * top
    if d >= 0:
        for c in range(1, d + 1):
            poly = _pmul(poly, _geometric(c, top), top)
    else:
        for c in range(d + 1, 1):
            poly = _pmul(poly, [Fraction(c), Fraction(1)] + [Fraction(0)] * (top - 1), top)
    return poly


def _apply_poly(sm, coeffs, v):
    """sum_k coeffs[k] M^k v by Horner."""
    out = [0] * len(v)
    for c in reversed(coeffs):
        out = _spmv(sm, out)
        if c:
            out = _vadd(out, v, c)
    return out


def compute_ifunction(model: ToricModel, bounds: Sequence[int], max_degree: Optional[int] = None
                      ) -> IFunction:
    """All beta-terms inside the box, pruned to c1.beta <= max_degree + 1.

    ``max_degree`` is the largest operator degree that will be applied
    (defaults to the top half-degree of the ring).
    """
    top = max(model.half_degrees())
    if max_degree is None:
        max_degree = top
    for name, c, b in zip(model.qnames, model.c1, bounds):
        # grading caps the power of a variable of positive degree
        if c > 0 and b < (max_degree + 1) // c:
            raise InsufficientTruncation(
                f"{name} needs {(max_degree + 1) // c} orders for operators up to degree "
                f"{max_degree}, got {b}")
    rays = [_sparse(m) for m in model.ray_matrices()]
    unit = model.ring.basis_vector(model.ring.unit)
    terms: Dict[Beta, Vec] = {}
    for beta in iproduct(*(range(b + 1) for b in bounds)):
        if sum(c * n for c, n in zip(model.c1, beta)) > max_degree + 1:
            continue
        degs = intersection_degrees(model.data, beta)
        v = unit
        for sm, d in zip(rays, degs):
            if d:
                v = _apply_poly(sm, gamma_factor(d, top), v)
                if not any(v):
                    break
        if any(v):
            terms[tuple(beta)] = v
    return IFunction(model, bounds, terms, max_degree)


# ---------------------------------------------------------------------------
# operators


class Operator:
    """sum_k c_k(q) (zD)^k, homogeneous of a fixed degree.

    Coefficients are truncated series; the z-power of a term c q^g (zD)^k is
    degree - |k| - c1.g and is never stored.
    """

    def __init__(self, degree: int, terms: Dict[Tuple[int, ...], TruncatedSeries]):
        self.degree = degree
        self.terms = {k: s for k, s in terms.items() if not s.is_zero()}

    def __sub__(self, other: "Operator") -> "Operator":
        out = dict(self.terms)
        for k, s in other.terms.items():
            out[k] = out[k] - s if k in out else -s
        return Operator(self.degree, out)

    def scaled(self, series: TruncatedSeries) -> "Operator":
        return Operator(self.degree, {k: s * series for k, s in self.terms.items()})

    def z_split(self, c1: Sequence[int]) -> Dict[Tuple[Tuple[int, ...], int], TruncatedSeries]:
        """Coefficients grouped by (zD exponent, z power)."""
        out: Dict[Tuple[Tuple[int, ...], int], Dict] = {}
        for k, s in self.terms.items():
            for g, c in s.terms.items():
                zp = self.degree - sum(k) - sum(a * b for a, b in zip(c1, g))
                out.setdefault((k, zp), {})[g] = c
        some = next(iter(self.terms.values()), None)
        if some is None:
            return {}
        return {key: TruncatedSeries(some.names, some.bounds, t) for key, t in out.items()}

    def at_z0(self, c1) -> Dict[Tuple[int, ...], TruncatedSeries]:
        return {k: s for (k, zp), s in self.z_split(c1).items() if zp == 0}


def apply_operator(ifn: IFunction, op: Operator) -> Dict[Beta, Vec]:
    out: Dict[Beta, Vec] = {}
    for k, coeff in op.terms.items():
        out = _vs_add(out, _series_times(ifn, coeff, ifn.power(k)))
    return out


def _series_times(ifn: IFunction, s: TruncatedSeries, vs: Dict[Beta, Vec]) -> Dict[Beta, Vec]:
    out: Dict[Beta, Vec] = {}
    bounds = ifn.bounds
    for g, c in s.terms.items():
        for beta, v in vs.items():
            b = tuple(x + y for x, y in zip(g, beta))
            if any(x > y for x, y in zip(b, bounds)) or not ifn.admissible(b):
                continue
            out[b] = _vadd(out[b], v, c) if b in out else [norm_coeff(c * x) for x in v]
    return {b: v for b, v in out.items() if any(v)}


def operator_from_terms(model: ToricModel, bounds: Sequence[int],
                        terms: Sequence[Tuple[Poly, int, Tuple[int, ...]]], degree: int) -> Operator:
    """Operator from (coefficient polynomial in q, z power, zD exponents) triples.

    Raises StructuralError unless every term has the declared degree.
    """
    out: Dict[Tuple[int, ...], TruncatedSeries] = {}
    names = model.qnames
    for coeff, zp, k in terms:
        coeff = coeff.extend(names)
        for g in coeff.terms:
            if zp + sum(k) + sum(a * b for a, b in zip(model.c1, g)) != degree:
                raise StructuralError(f"operator term {coeff} z^{zp} zD^{k} is not of degree {degree}")
        s = TruncatedSeries.from_poly(coeff, bounds)
        out[tuple(k)] = out[tuple(k)] + s if tuple(k) in out else s
    return Operator(degree, out)


def _monomial_operator(model: ToricModel, bounds, poly: Poly, degree: int) -> Operator:
    terms = {}
    names = model.qnames
    for e, c in poly.terms.items():
        terms[tuple(e)] = TruncatedSeries(names, bounds, {(0,) * len(names): c})
    return Operator(degree, terms)


@dataclass
class Extraction:
    model: ToricModel
    ifn: IFunction
    operators: List[Operator]
    results: List[Dict[Beta, Vec]]
    matrices: List[QuantumMatrix] = field(default_factory=list)
    raw: List[List[List[TruncatedSeries]]] = field(default_factory=list)


def _excess(model: ToricModel, res: Dict[Beta, Vec], degree: int, target: int):
    """Group the non-negative z-power components (other than the target class) by level."""
    hd = model.half_degrees()
    zero = (0,) * model.data.rank
    levels: Dict[int, Dict[Beta, Vec]] = {}
    for beta, v in res.items():
        c1b = sum(c * n for c, n in zip(model.c1, beta))
        for k, x in enumerate(v):
            if not x:
                continue
            s = degree - hd[k] - c1b
            if s < 0:
                continue
            if s == 0 and beta == zero and k == target:
                if x != 1:
                    raise InsufficientTruncation(f"leading coefficient of target {k} is {x}")
                continue
            levels.setdefault(s, {}).setdefault(beta, [0] * len(v))[k] = x
    return levels


def find_extraction_operators(ifn: IFunction, max_steps: int = 64
                              ) -> Tuple[List[Operator], List[Dict[Beta, Vec]]]:
    """Operators D_i with D_i I = phi_i + O(1/z) for every basis element phi_i.

    Targets are processed by degree, then basis order.
    """
    model = ifn.model
    hd = model.half_degrees()
    order = sorted(range(model.ring.dim), key=lambda i: (hd[i], i))
    names = model.qnames
    ops: List[Optional[Operator]] = [None] * model.ring.dim
    results: List[Optional[Dict[Beta, Vec]]] = [None] * model.ring.dim
    polys = model.ring.polys
    for i in order:
        a = hd[i]
        op = _monomial_operator(model, ifn.bounds, polys[i].extend(model.data.names), a)
        res = apply_operator(ifn, op)
        for _ in range(max_steps):
            levels = _excess(model, res, a, i)
            if not levels:
                break
            s = max(levels)
            coeffs: Dict[int, Dict[Beta, object]] = {}
            for beta, v in levels[s].items():
                for k, x in enumerate(v):
                    if x:
                        coeffs.setdefault(k, {})[beta] = x
            for k, cs in coeffs.items():
                if ops[k] is None:
                    raise InsufficientTruncation(
                        f"correcting target {model.ring.names[i]} needs the operator for "
                        f"{model.ring.names[k]}, which is not yet known (non-trivial mirror map?)")
                series = TruncatedSeries(names, ifn.bounds, cs)
                op = op - ops[k].scaled(series)
                res = _vs_add(res, _series_times(ifn, series, results[k]), -1)
        else:
            raise InsufficientTruncation(f"operator search for {model.ring.names[i]} did not terminate")
        ops[i] = op
        results[i] = res
        log.debug("operator for %s: %d terms", model.ring.names[i], len(op.terms))
    return ops, results


def _fit(model: ToricModel, s: TruncatedSeries, margin: int = 2) -> RationalFunction:
    exact = [v for v in model.qnames if v not in model.exceptional]
    ansatz = [f.extend(model.qnames) for f in model.ansatz]
    if s.is_zero():
        return RationalFunction.zero(model.qnames)
    try:
        return rational_from_series(s, ansatz, margin=margin, exact_vars=exact)
    except NoClosedForm as exc:
        raise NoClosedForm(f"{exc}; raw series {s}", series=s) from exc


def extract_quantum_matrices(ifn: IFunction, ops: Sequence[Operator],
                             results: Sequence[Dict[Beta, Vec]], margin: int = 2
                             ) -> Tuple[List[QuantumMatrix], List[List[List[TruncatedSeries]]]]:
    """Matrix of m_j* for every nef basis element, entries fitted to closed forms."""
    model = ifn.model
    hd = model.half_degrees()
    n = model.ring.dim
    names = model.qnames
    mats, raws = [], []
    for j, gen in enumerate(model.data.names):
        raw = [[None] * n for _ in range(n)]
        entries = [[None] * n for _ in range(n)]
        for i in range(n):
            z = ifn.zd(j, results[i])
            cols: List[Dict[Beta, object]] = [dict() for _ in range(n)]
            for beta, v in z.items():
                c1b = sum(c * x for c, x in zip(model.c1, beta))
                for k, x in enumerate(v):
                    if x and hd[k] + c1b == hd[i] + 1:
                        cols[k][beta] = x
            for k in range(n):
                s = TruncatedSeries(names, ifn.bounds, cols[k])
                raw[k][i] = s
                entries[k][i] = _fit(model, s, margin)
        mats.append(QuantumMatrix(list(model.ring.names), gen, entries, names))
        raws.append(raw)
    return mats, raws


def quantum_ring(model: ToricModel, ops: Sequence[Operator], matrices: Sequence[QuantumMatrix],
                 margin: int = 2) -> GradedRing:
    """Full quantum product table phi_a* = D_a|_{z=0}(m_1*, ..., m_r*)."""
    n = model.ring.dim
    names = model.qnames
    mats = [[[e if not (isinstance(e, RationalFunction) and e.is_zero()) else 0 for e in row]
             for row in qm.entries] for qm in matrices]
    sparse = [[[(c, e) for c, e in enumerate(row) if e] for row in m] for m in mats]
    cache: Dict[Tuple[Tuple[int, ...], int], list] = {}

    def image(k, b):
        """M^k e_b."""
        key = (k, b)
        if key in cache:
            return cache[key]
        if not any(k):
            v = [0] * n
            v[b] = RationalFunction.const(names, 1)
        else:
            j = max(i for i, e in enumerate(k) if e)
            prev = list(k)
            prev[j] -= 1
            u = image(tuple(prev), b)
            v = [sum((e * u[c] for c, e in row if u[c]), RationalFunction.zero(names))
                 for row in sparse[j]]
        cache[key] = v
        return v

    mult = []
    for a in range(n):
        z0 = ops[a].at_z0(model.c1)
        coeffs = {k: _fit(model, s, margin) for k, s in z0.items()}
        cols = []
        for b in range(n):
            acc = [RationalFunction.zero(names) for _ in range(n)]
            for k, c in coeffs.items():
                img = image(k, b)
                acc = [x + c * y if y else x for x, y in zip(acc, img)]
            cols.append([_demote(x) for x in acc])
        mult.append(linalg.transpose(cols))
    return GradedRing(model.ring.names, model.ring.degrees, mult, model.ring.pairing,
                      model.ring.unit, names, model.data.novikov_degrees, model.ring.polys)


def _demote(x: RationalFunction):
    if x.is_zero():
        return 0
    return x


def run_extraction(model: ToricModel, bounds: Sequence[int], margin: int = 2) -> Extraction:
    ifn = compute_ifunction(model, bounds)
    ops, results = find_extraction_operators(ifn)
    mats, raws = extract_quantum_matrices(ifn, ops, results, margin)
    return Extraction(model, ifn, ops, results, mats, raws)


def operator_terms(model: ToricModel, op: Operator, margin: int = 2):
    """Closed-form terms (coefficient, z power, zD exponents), sorted for display."""
    out = []
    for (k, zp), s in sorted(op.z_split(model.c1).items(), key=lambda t: (-sum(t[0][0]), t[0])):
        out.append((_fit(model, s, margin), zp, k))
    return out


def format_operator(model: ToricModel, op: Operator, margin: int = 2) -> str:
    parts = []
    for coeff, zp, k in operator_terms(model, op, margin):
        mono = []
        if zp:
            mono.append("z" if zp == 1 else f"z^{zp}")
        for j, e in enumerate(k):
            if e:
                mono.append(f"(zD{j + 1})" if e == 1 else f"(zD{j + 1})^{e}")
        body = "*".join(mono) if mono else "1"
        parts.append(f"({coeff})*{body}" if str(coeff) != "1" else body)
    return " + ".join(parts) if parts else "0"


def toric_model(fan, data: DivisorClassData, basis: Sequence[Poly], ansatz: Sequence[Poly] = (),
                exceptional: Sequence[str] = (), names: Sequence[str] | None = None) -> ToricModel:
    """Classical cohomology of a smooth toric variety from its fan and nef basis."""
    from .graded_ring import ring_from_presentation
    data.check(fan)
    relations = data.relations(fan)
    ring, pres = ring_from_presentation(data.names, relations, [b.extend(data.names) for b in basis],
                                        names=names, normalization=(data.point_class(fan), 1))
    qn = tuple(f"q{j + 1}" for j in range(data.rank))
    return ToricModel(ring, pres, data, tuple(exceptional), [a.extend(qn) for a in ansatz])
