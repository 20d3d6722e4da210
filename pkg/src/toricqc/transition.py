"""Residues of quantum products along q_b = 1, the filtrations they define,
and verification of subquotient isomorphisms with the smoothing side."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .algebra import linalg
from .algebra.poly import Poly, norm_coeff
from .algebra.rational import RationalFunction, residue_at_one
from .algebra.scalar import format_scalar
from .errors import EvaluationPole, HigherOrderPole, NonIsolatedPole, StructuralError, TheoremViolation
from .graded_ring import GradedRing, Verdict, coordinates_mod, format_entry

__all__ = [
    "ResidueData", "compute_residues", "Filtration", "compute_filtration", "WeightFiltration",
    "weight_filtration", "jordan_blocks", "ThetaMap", "derive_theta", "TransitionReport",
    "verify_transition", "conifold_residue_identity", "rank_one_model", "check_topology_diagram",
    "rename_variables", "orthogonal_complement",
]

Matrix = List[List[object]]


def _fmt_matrix(m: Matrix) -> List[List[str]]:
    return [[format_entry(x) if x else "0" for x in row] for row in m]


def _fmt_vectors(vs) -> List[List[str]]:
    return [[format_entry(x) if x else "0" for x in v] for v in vs]


# ---------------------------------------------------------------------------
# residues


@dataclass
class ResidueData:
    matrices: Dict[str, Matrix]
    convention: str
    evaluation: Dict[str, object]
    nilpotency: Dict[str, int]
    order_check: Dict[str, bool] = field(default_factory=dict)

    def to_dict(self):
        return {"convention": self.convention,
                "evaluation": {k: format_scalar(v) for k, v in self.evaluation.items()},
                "nilpotency_index": self.nilpotency,
                "opposite_order_agrees": self.order_check,
                "matrices": {k: _fmt_matrix(m) for k, m in self.matrices.items()}}


def nilpotency_index(n: Matrix) -> Optional[int]:
    """Smallest k with N^k = 0, or None when N is not nilpotent."""
    dim = len(n)
    p = linalg.identity(dim)
    for k in range(1, dim + 1):
        p = linalg.matmul(p, n)
        if linalg.is_zero_matrix(p):
            return k
    return None


def _residue_entry(x, var: str, convention: str, rest: Mapping[str, object]):
    if not x:
        return 0
    if not isinstance(x, RationalFunction):
        return 0
    r = residue_at_one(x, var, convention)
    if rest:
        r = r.substitute(rest)
    if not r.is_constant():
        raise TheoremViolation(f"residue {r} depends on the non-exceptional variables")
    return norm_coeff(r.num.constant_term())


def _opposite_entry(x, var: str, convention: str, rest: Mapping[str, object]):
    """Set the other exceptional variables to 1 first, then take the residue."""
    if not x or not isinstance(x, RationalFunction):
        return 0
    r = x.substitute(rest) if rest else x
    names = r.names
    r = residue_at_one(r, var, convention)
    return norm_coeff(r.substitute({v: 0 for v in names if v != var}).num.constant_term()) \
        if not r.den else None


def compute_residues(matrices: Mapping[str, Matrix], exceptional: Sequence[str],
                     convention: str = "dlog", check_order: bool = True) -> ResidueData:
    """N_b = Res_{q_b = 1}(phi_b *) with the other exceptional variables then set to 1.

    ``matrices`` maps each exceptional variable to the matrix of the divisor
    dual to it.
    """
    exceptional = list(exceptional)
    out, nil, order = {}, {}, {}
    for var, m in matrices.items():
        rest = {v: 1 for v in exceptional if v != var}
        try:
            n = [[_residue_entry(x, var, convention, rest) for x in row] for row in m]
        except (HigherOrderPole, NonIsolatedPole, EvaluationPole) as exc:
            raise TheoremViolation(f"residue along {var} = 1 is not simple: {exc}") from exc
        k = nilpotency_index(n)
        if k is None:
            raise TheoremViolation(f"residue along {var} = 1 is not nilpotent",
                                   report=_fmt_matrix(n))
        out[var], nil[var] = n, k
        if check_order and rest:
            try:
                alt = [[_opposite_entry(x, var, convention, rest) for x in row] for row in m]
                order[var] = alt == n
            except (EvaluationPole, HigherOrderPole, NonIsolatedPole):
                order[var] = False
    return ResidueData(out, convention, {v: 1 for v in exceptional}, nil, order)


# ---------------------------------------------------------------------------
# filtrations


def orthogonal_complement(space: Sequence[Sequence[object]], pairing: Matrix) -> List[list]:
    """{x : (x, v) = 0 for all v in space}."""
    if not space:
        return linalg.identity(len(pairing))
    rows = [linalg.matvec(linalg.transpose(pairing), list(v)) for v in space]
    return linalg.nullspace(rows, len(pairing))


@dataclass
class Filtration:
    V: List[list]
    W: List[list]
    V_perp_meet: List[list]
    self_adjoint: Dict[str, bool]
    matches_perp: bool

    @property
    def dims(self) -> Tuple[int, int]:
        return len(self.V), len(self.W)

    def to_dict(self):
        return {"dim_V": len(self.V), "dim_W": len(self.W), "V": _fmt_vectors(self.V),
                "W": _fmt_vectors(self.W), "self_adjoint": self.self_adjoint,
                "W_equals_V_cap_V_perp": self.matches_perp}


def is_self_adjoint(n: Matrix, pairing: Matrix) -> bool:
    """(N x, y) = (x, N y) for all basis vectors."""
    return linalg.matmul(linalg.transpose(n), pairing) == linalg.matmul(pairing, n)


def compute_filtration(residues: Mapping[str, Matrix] | ResidueData,
                       pairing: Optional[Matrix] = None) -> Filtration:
    """V = intersection of the kernels, W = V intersected with the sum of the images."""
    mats = residues.matrices if isinstance(residues, ResidueData) else dict(residues)
    dim = len(next(iter(mats.values())))
    V = linalg.identity(dim)
    images: List[list] = []
    for n in mats.values():
        V = linalg.intersect(V, linalg.nullspace(n, dim))
        images.extend(linalg.column_space(n))
    V = linalg.span_basis(V)
    W = linalg.intersect(V, linalg.span_basis(images)) if images else []
    meet: List[list] = []
    adjoint: Dict[str, bool] = {}
    matches = False
    if pairing is not None:
        meet = linalg.intersect(V, orthogonal_complement(V, pairing))
        adjoint = {k: is_self_adjoint(n, pairing) for k, n in mats.items()}
        matches = linalg.subspace_equal(meet, W)
    return Filtration(V, W, meet, adjoint, matches)


def jordan_blocks(n: Matrix) -> Dict[int, int]:
    """Jordan block sizes of a nilpotent matrix from the ranks of its powers."""
    dim = len(n)
    if nilpotency_index(n) is None and dim:
        raise StructuralError("matrix is not nilpotent")
    ranks = [dim]
    p = linalg.identity(dim)
    while ranks[-1]:
        p = linalg.matmul(p, n)
        ranks.append(linalg.rank(p))
    ranks.append(0)
    out = {}
    for k in range(1, len(ranks) - 1):
        at_least = ranks[k - 1] - ranks[k]
        at_least_next = ranks[k] - ranks[k + 1]
        if at_least - at_least_next:
            out[k] = at_least - at_least_next
    return out


@dataclass
class WeightFiltration:
    levels: Dict[int, List[list]]
    blocks: Dict[int, int]

    def piece(self, k: int) -> List[list]:
        lo, hi = min(self.levels), max(self.levels)
        if k < lo:
            return []
        return self.levels[min(k, hi)]

    def to_dict(self):
        return {"jordan_blocks": {str(k): v for k, v in sorted(self.blocks.items())},
                "dims": {str(k): len(v) for k, v in sorted(self.levels.items())},
                "levels": {str(k): _fmt_vectors(v) for k, v in sorted(self.levels.items())}}


def weight_filtration(n: Matrix) -> WeightFiltration:
    """Monodromy weight filtration centred at 0:

    W_k = sum_{j >= max(0, -k)} Im N^j  intersected with  Ker N^(k + j + 1).
    """
    dim = len(n)
    blocks = jordan_blocks(n)
    top = max(blocks) if blocks else 1
    powers = [linalg.identity(dim)]
    for _ in range(2 * top + 1):
        powers.append(linalg.matmul(powers[-1], n))

    def image(j):
        return linalg.column_space(powers[j]) if j < len(powers) else []

    def kernel(j):
        if j <= 0:
            return []
        return linalg.nullspace(powers[min(j, len(powers) - 1)], dim)

    levels = {}
    for k in range(-(top - 1), top):
        parts: List[list] = []
        for j in range(max(0, -k), top + 1):
            parts.extend(linalg.intersect(image(j), kernel(k + j + 1)))
        levels[k] = linalg.span_basis(parts)
    levels[-top] = []
    if not blocks:
        levels = {-1: [], 0: linalg.identity(dim)}
    return WeightFiltration(dict(sorted(levels.items())), blocks)


# ---------------------------------------------------------------------------
# the map theta and the intertwining checks


def rename_variables(x, names: Sequence[str]):
    """Same rational function with variables renamed positionally."""
    if not isinstance(x, RationalFunction):
        return x
    names = tuple(names)

    def ren(p: Poly) -> Poly:
        return Poly(names, p.terms)
    return RationalFunction(ren(x.num), [(ren(f), m) for f, m in x.den])


@dataclass
class ThetaMap:
    """theta on a subquotient: lifts (resolution coordinates) and their images."""
    lifts: List[list]
    images: List[list]
    kernel: List[list]
    lift_names: List[str] = field(default_factory=list)

    def matrix(self) -> Matrix:
        return linalg.transpose([list(v) for v in self.images])

    def apply(self, v: Sequence[object]) -> Optional[list]:
        """theta of a vector of V (resolution coordinates), or None if v is not in V."""
        c = linalg.solve(linalg.transpose(self.lifts + self.kernel), list(v))
        if c is None:
            return None
        return linalg.matvec(self.matrix(), c[:len(self.lifts)])

    def negated_at(self, indices: Sequence[int]) -> "ThetaMap":
        imgs = [[norm_coeff(-x) for x in v] if i in indices else list(v)
                for i, v in enumerate(self.images)]
        return ThetaMap(self.lifts, imgs, self.kernel, self.lift_names)

    def to_dict(self):
        return {"lifts": self.lift_names or _fmt_vectors(self.lifts),
                "images": _fmt_vectors(self.images), "kernel": _fmt_vectors(self.kernel)}


@dataclass
class TransitionReport:
    name: str
    checks: Dict[str, Verdict] = field(default_factory=dict)
    data: Dict[str, object] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(bool(v) for v in self.checks.values())

    def add(self, key: str, verdict: Verdict) -> Verdict:
        self.checks[key] = verdict
        return verdict

    def to_dict(self):
        return {"name": self.name, "ok": self.ok,
                "checks": {k: v.to_dict() for k, v in self.checks.items()},
                "data": self.data}


def _evaluate_vector(v, evaluation, rest):
    out = []
    for x in v:
        if isinstance(x, RationalFunction):
            y = x.substitute(evaluation)
            if rest:
                from .graded_ring import _restrict
                y = _restrict(y, rest)
            else:
                y = y.constant_value()
            out.append(y)
        else:
            out.append(x)
    return out


def _quotient_action(ring: GradedRing, g: Sequence[object], lifts, W, evaluation, rest):
    """Matrix of g * (evaluated) on V/W in the lift basis."""
    cols = []
    for b, v in enumerate(lifts):
        prod = ring.product(list(g), v)
        ev = _evaluate_vector(prod, evaluation, rest)
        c = coordinates_mod(ev, lifts, W, rest)
        if c is None:
            return None, b
        cols.append(c)
    return linalg.transpose(cols), None


def _zero_entry(x) -> bool:
    return not x


def _mat_eq(a: Matrix, b: Matrix) -> Optional[Tuple[int, int]]:
    for i, (ra, rb) in enumerate(zip(a, b)):
        for j, (x, y) in enumerate(zip(ra, rb)):
            d = x - y if not (_zero_entry(x) and _zero_entry(y)) else 0
            if d:
                return i, j
    return None


def verify_transition(name: str, ring: GradedRing, V: Sequence[list], W: Sequence[list],
                      theta: ThetaMap, oracle: GradedRing, evaluation: Mapping[str, object],
                      identification: Mapping[str, str],
                      generators: Mapping[str, Tuple[list, list]],
                      full_products: bool = True, onto: bool = True) -> TransitionReport:
    """Checks (i)-(iv) for a subquotient V/W of a quantum ring.

    ``generators`` maps a label to (vector in the resolution ring, vector of its
    image in the oracle).  ``identification`` renames the surviving Novikov
    variables to the oracle's.  With ``onto=False`` theta only has to embed
    the quotient as a subring.
    """
    report = TransitionReport(name)
    rest = tuple(v for v in ring.variables if v not in evaluation)
    if tuple(identification.get(v, v) for v in rest) != tuple(oracle.variables):
        raise StructuralError(f"cannot identify variables {rest} with {oracle.variables}")
    lifts, W = theta.lifts, [list(w) for w in W]
    n = len(lifts)
    report.data.update({"dim_V": len(V), "dim_W": len(W), "dim_quotient": n})

    # (i) regularity and (ii) closure over all pairs of V
    pole = closure = None
    basis_v = linalg.span_basis([list(v) for v in V])
    for a in range(len(basis_v)):
        for b in range(a, len(basis_v)):
            prod = ring.product(basis_v[a], basis_v[b])
            try:
                ev = _evaluate_vector(prod, evaluation, rest)
            except EvaluationPole as exc:
                pole = pole or (a, b, str(exc))
                continue
            if closure is None and coordinates_mod(ev, lifts, W, rest) is None:
                closure = (a, b, [format_entry(x) if x else "0" for x in ev])
    report.add("regular", Verdict(pole is None, "products of V are regular at the evaluation point"
                                  if pole is None else "product has a pole", pole))
    report.add("closed", Verdict(closure is None, "products of V stay in V modulo W"
                                 if closure is None else "product leaves V + W", closure))

    # (iii) intertwining of divisor operators, then of all products
    t = theta.matrix()
    rename = [identification.get(v, v) for v in rest]
    bad = None
    for label, (g, g_img) in generators.items():
        act, fail = _quotient_action(ring, g, lifts, W, evaluation, rest)
        if act is None:
            bad = (label, "quotient action undefined", fail)
            break
        act = [[rename_variables(x, rename) for x in row] for row in act]
        lhs = linalg.matmul(t, act)
        rhs = linalg.matmul(oracle.matrix_of(g_img), t)
        where = _mat_eq(lhs, rhs)
        if where is not None:
            i, j = where
            bad = (label, oracle.names[i], theta.lift_names[j] if theta.lift_names else j,
                   format_entry(lhs[i][j]), format_entry(rhs[i][j]))
            break
    report.add("intertwines_divisors", Verdict(bad is None, "theta intertwines divisor operators"
                                               if bad is None else "intertwining fails", bad))
    if full_products and bad is None:
        bad = None
        for a in range(n):
            for b in range(a, n):
                ev = _evaluate_vector(ring.product(lifts[a], lifts[b]), evaluation, rest)
                c = coordinates_mod(ev, lifts, W, rest)
                if c is None:
                    bad = (a, b, "product leaves V + W")
                    break
                c = [rename_variables(x, rename) for x in c]
                lhs = linalg.matvec(t, c)
                rhs = oracle.product(theta.images[a], theta.images[b])
                if any((x - y) if not (_zero_entry(x) and _zero_entry(y)) else 0
                       for x, y in zip(lhs, rhs)):
                    bad = (a, b, [format_entry(x) if x else "0" for x in lhs],
                           [format_entry(x) if x else "0" for x in rhs])
                    break
            if bad:
                break
        report.add("ring_isomorphism", Verdict(bad is None, "theta is multiplicative on V/W"
                                               if bad is None else "theta is not multiplicative",
                                               bad))

    rk = linalg.rank(t)
    if onto:
        report.add("bijective", Verdict(rk == oracle.dim == n,
                                        f"theta has rank {rk} onto dimension {oracle.dim}"))
    else:
        report.add("injective", Verdict(rk == n, f"theta has rank {rk} on a quotient of "
                                                 f"dimension {n}"))

    # (iv) pairing
    bad = None
    for a in range(n):
        for b in range(n):
            lhs = ring.pair(lifts[a], lifts[b])
            rhs = oracle.pair(theta.images[a], theta.images[b])
            if lhs != rhs:
                bad = (a, b, format_scalar(lhs), format_scalar(rhs))
                break
        if bad:
            break
    report.add("pairing", Verdict(bad is None, "theta preserves the Poincare pairing"
                                  if bad is None else "pairing differs", bad))
    return report


def derive_theta(ring: GradedRing, lifts: Sequence[list], W: Sequence[list], oracle: GradedRing,
                 generators: Mapping[str, Tuple[list, list]], evaluation: Mapping[str, object]
                 ) -> ThetaMap:
    """The linear map V/W -> oracle fixed by 1 -> 1 and intertwining of the
    given divisors, computed in the classical limit of both sides."""
    rest = tuple(v for v in ring.variables if v not in evaluation)
    zero = {v: 0 for v in rest}
    full = dict(evaluation)
    full.update(zero)
    lifts = [list(v) for v in lifts]
    W = [list(w) for w in W]
    ocl = oracle.classical_limit()
    known: List[Tuple[list, list]] = [(ring.basis_vector(ring.unit), ocl.basis_vector(ocl.unit))]
    frontier = list(known)
    while frontier:
        nxt = []
        for v, img in frontier:
            for g, g_img in generators.values():
                ev = _evaluate_vector(ring.product(list(g), v), full, ())
                if linalg.in_span(ev, [k[0] for k in known] + W):
                    continue
                new = (ev, ocl.product(g_img, img))
                known.append(new)
                nxt.append(new)
        frontier = nxt
    basis = [k[0] for k in known]
    images = []
    for v in lifts:
        c = linalg.solve(linalg.transpose(basis + W), v)
        if c is None:
            raise StructuralError("divisors do not generate the subquotient")
        img = [0] * oracle.dim
        for coeff, (_, im) in zip(c, known):
            if coeff:
                img = [norm_coeff(x + coeff * y) for x, y in zip(img, im)]
        images.append(img)
    return ThetaMap(lifts, images, W)


# ---------------------------------------------------------------------------
# conifold identities


def conifold_residue_identity(degrees: Sequence[int], order: int = 12) -> Verdict:
    """sum_{n>=1} prod_j (v_j . nE) n^-3 q^n = prod_j (v_j . E) q/(1-q), to the given order."""
    if len(degrees) != 3:
        raise StructuralError("need three intersection numbers")
    c = 1
    for d in degrees:
        c *= d
    names = ("q",)
    lhs = {n: Fraction(c * n ** 3, n ** 3) for n in range(1, order + 1)}
    rf = RationalFunction(Poly(names, {(1,): c}), [(Poly(names, {(0,): 1, (1,): -1}), 1)])
    series = rf.expand((order,))
    for n in range(order + 1):
        left = lhs.get(n, 0)
        right = series.coefficient((n,))
        if left != right:
            return Verdict(False, "multiple-cover sum differs from its closed form", (n, left, right))
    return Verdict(True, f"agree to order {order}")


def rank_one_model(n: Matrix, pairing: Matrix, e: Sequence[object]) -> Verdict:
    """N = c (., E) E for a nonzero constant c; the witness is c."""
    dim = len(n)
    model = [[norm_coeff(sum(pairing[j][k] * e[k] for k in range(dim)) * e[i])
              for j in range(dim)] for i in range(dim)]
    if linalg.rank(n) != 1:
        return Verdict(False, f"N has rank {linalg.rank(n)}, expected 1")
    i, j = next((i, j) for i in range(dim) for j in range(dim) if model[i][j])
    c = Fraction(n[i][j]) / Fraction(model[i][j]) if model[i][j] else None
    if c is None or linalg.mscale(c, model) != [[norm_coeff(x) for x in row] for row in n]:
        return Verdict(False, "N is not a multiple of w -> (w, E) E")
    return Verdict(True, f"N(w) = {format_scalar(norm_coeff(c))} (w, E) E", norm_coeff(c))


def check_topology_diagram(theta: ThetaMap, V: Sequence[list], W: Sequence[list],
                           image_pi: Sequence[list], pi_ker_r: Sequence[list],
                           r_values: Sequence[list], image_r: Optional[Sequence[list]] = None,
                           expected_codim: Optional[int] = None) -> Verdict:
    """theta o pi^* = r^* on the fixture basis of Image pi^*, and the inclusions."""
    image_pi = [list(v) for v in image_pi]
    if linalg.rank(image_pi) != len(image_pi):
        return Verdict(False, "fixture basis of Image pi^* is dependent")
    if not all(linalg.in_span(v, V) for v in image_pi):
        return Verdict(False, "Image pi^* is not contained in V",
                       next(v for v in image_pi if not linalg.in_span(v, V)))
    if not all(linalg.in_span(w, image_pi) for w in W):
        return Verdict(False, "W is not contained in Image pi^*")
    if not linalg.subspace_equal([list(v) for v in pi_ker_r], [list(w) for w in W]):
        return Verdict(False, "pi^*(Ker r^*) differs from W")
    codim = len(linalg.span_basis([list(v) for v in V])) - len(image_pi)
    if expected_codim is not None and codim != expected_codim:
        return Verdict(False, f"Image pi^* has codimension {codim} in V, expected {expected_codim}")
    for v, want in zip(image_pi, r_values):
        got = theta.apply(v)
        if got is None or [norm_coeff(x) for x in got] != [norm_coeff(x) for x in want]:
            return Verdict(False, "theta o pi^* differs from r^*", (v, got, want))
    if image_r is not None:
        imgs = [theta.apply(v) for v in image_pi]
        if not linalg.subspace_equal(linalg.span_basis(imgs), [list(x) for x in image_r]):
            return Verdict(False, "image of r^* differs from the fixture")
    return Verdict(True, f"theta o pi^* = r^* on {len(image_pi)} classes; codim {codim} in V")
