"""Rational simplicial fans and the cohomology data of smooth toric varieties."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import gcd
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .algebra import linalg
from .algebra.poly import Poly
from .errors import StructuralError, UnsupportedFan

__all__ = [
    "Fan", "FanReport", "validate_fan", "read_fan", "write_fan", "parse_fan",
    "primitive_collections", "stanley_reisner_presentation", "SRPresentation",
    "DivisorClassData", "intersection_degrees", "unimodular_match", "cone_facets",
    "small_resolutions",
]


@dataclass(frozen=True)
class Fan:
    """Rays are integer tuples; cones are sorted tuples of 0-based ray indices."""
    dim: int
    rays: Tuple[Tuple[int, ...], ...]
    cones: Tuple[Tuple[int, ...], ...]

    @classmethod
    def make(cls, rays: Sequence[Sequence[int]], cones: Sequence[Sequence[int]],
             one_based: bool = False) -> "Fan":
        rays = tuple(tuple(int(x) for x in r) for r in rays)
        if not rays:
            raise StructuralError("a fan needs at least one ray")
        dim = len(rays[0])
        if any(len(r) != dim for r in rays):
            raise StructuralError("rays have different lengths")
        shift = 1 if one_based else 0
        out = []
        for c in cones:
            idx = tuple(sorted(int(i) - shift for i in c))
            if len(set(idx)) != len(idx) or any(i < 0 or i >= len(rays) for i in idx):
                raise StructuralError(f"cone {list(c)} has bad ray indices")
            out.append(idx)
        return cls(dim, rays, tuple(out))

    @property
    def nrays(self) -> int:
        return len(self.rays)

    def ray_matrix(self, cone: Sequence[int]) -> List[List[int]]:
        return [list(self.rays[i]) for i in cone]

    def cone_set(self) -> set:
        return {frozenset(c) for c in self.cones}

    def is_face(self, subset) -> bool:
        s = set(subset)
        return any(s <= set(c) for c in self.cones)


def _primitive(v) -> bool:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g == 1


def cone_facets(fan: Fan, cone: Sequence[int]) -> List[Tuple[FrozenSet[int], Tuple[Fraction, ...]]]:
    """Facets of a full-dimensional cone as (ray set, inward normal)."""
    d = fan.dim
    rays = list(cone)
    seen: Dict[FrozenSet[int], Tuple] = {}
    for sub in combinations(rays, d - 1):
        m = fan.ray_matrix(sub)
        if linalg.rank(m) != d - 1:
            continue
        (u,) = linalg.nullspace(m, d)
        vals = [sum(a * b for a, b in zip(u, fan.rays[i])) for i in rays]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            u = [-x for x in u]
            vals = [-v for v in vals]
        else:
            continue
        face = frozenset(i for i, v in zip(rays, vals) if v == 0)
        if face not in seen:
            seen[face] = tuple(u)
    return list(seen.items())


@dataclass
class FanReport:
    simplicial: bool
    smooth: bool
    pseudo_complete: bool
    facet_pairing: bool
    samples: int
    samples_covered: int
    nonsimplicial_cones: List[Tuple[int, ...]] = field(default_factory=list)
    nonsmooth_cones: List[Tuple[int, ...]] = field(default_factory=list)
    unpaired_facets: List[Tuple[int, ...]] = field(default_factory=list)
    note: str = ("completeness is tested by a necessary battery: facet pairing "
                 "plus random directions, not a full proof")

    def to_dict(self) -> dict:
        return {
            "simplicial": self.simplicial, "smooth": self.smooth,
            "pseudo_complete": self.pseudo_complete, "facet_pairing": self.facet_pairing,
            "samples": self.samples, "samples_covered": self.samples_covered,
            "nonsimplicial_cones": [[i + 1 for i in c] for c in self.nonsimplicial_cones],
            "nonsmooth_cones": [[i + 1 for i in c] for c in self.nonsmooth_cones],
            "unpaired_facets": [[i + 1 for i in c] for c in self.unpaired_facets],
            "note": self.note,
        }


def validate_fan(fan: Fan, samples: int = 64, seed: int = 0) -> FanReport:
    for r in fan.rays:
        if not _primitive(r):
            raise StructuralError(f"ray {r} is not primitive")
    nonsimp, nonsmooth = [], []
    for c in fan.cones:
        if linalg.rank(fan.ray_matrix(c)) != len(c):
            nonsimp.append(c)
        elif len(c) != fan.dim or abs(linalg.det(fan.ray_matrix(c))) != 1:
            nonsmooth.append(c)
    simplicial = not nonsimp
    smooth = simplicial and not nonsmooth

    full = [c for c in fan.cones if linalg.rank(fan.ray_matrix(c)) == fan.dim]
    facets = {c: cone_facets(fan, c) for c in full}
    count: Dict[FrozenSet[int], int] = {}
    for c in full:
        for face, _ in facets[c]:
            count[face] = count.get(face, 0) + 1
    unpaired = sorted(tuple(sorted(f)) for f, k in count.items() if k != 2)
    pairing = len(full) == len(fan.cones) and not unpaired

    rng = random.Random(seed)
    covered = 0
    for _ in range(samples):
        v = [rng.randint(-97, 97) for _ in range(fan.dim)]
        if not any(v):
            v[0] = 1
        for c in full:
            if all(sum(a * b for a, b in zip(u, v)) >= 0 for _, u in facets[c]):
                covered += 1
                break
    return FanReport(simplicial, smooth, pairing and covered == samples, pairing, samples,
                     covered, nonsimp, nonsmooth, unpaired)


# ---------------------------------------------------------------------------
# text format: rays, blank line, cones (1-based)


def parse_fan(text: str) -> Fan:
    lines = [ln.split("#", 1)[0].rstrip() for ln in text.splitlines()]
    while lines and not lines[0].strip():
        lines.pop(0)
    rays, cones = [], []
    section = rays
    for ln in lines:
        if not ln.strip():
            if rays:
                section = cones
            continue
        section.append([int(x) for x in ln.split()])
    return Fan.make(rays, cones, one_based=True)


def write_fan(fan: Fan) -> str:
    out = [" ".join(str(x) for x in r) for r in fan.rays]
    out.append("")
    out += [" ".join(str(i + 1) for i in c) for c in fan.cones]
    return "\n".join(out) + "\n"


def read_fan(path) -> Fan:
    with open(path) as fh:
        return parse_fan(fh.read())


# ---------------------------------------------------------------------------
# cohomology


def primitive_collections(fan: Fan) -> List[Tuple[int, ...]]:
    """Minimal subsets of rays that do not span a cone."""
    faces = set()
    for c in fan.cones:
        for k in range(len(c) + 1):
            faces.update(frozenset(s) for s in combinations(c, k))
    out = []
    for k in range(1, fan.nrays + 1):
        for s in combinations(range(fan.nrays), k):
            fs = frozenset(s)
            if fs in faces:
                continue
            if all(fs - {x} in faces for x in fs):
                out.append(s)
    return out


@dataclass
class SRPresentation:
    generators: Tuple[str, ...]
    linear: List[Poly]
    monomial: List[Poly]
    collections: List[Tuple[int, ...]]


def stanley_reisner_presentation(fan: Fan, names: Sequence[str] | None = None) -> SRPresentation:
    report = validate_fan(fan, samples=16)
    if not report.smooth:
        raise UnsupportedFan("Stanley-Reisner presentation needs a smooth fan")
    gens = tuple(names) if names else tuple(f"R{i + 1}" for i in range(fan.nrays))
    linear = []
    for k in range(fan.dim):
        terms = {}
        for i, r in enumerate(fan.rays):
            if r[k]:
                e = [0] * fan.nrays
                e[i] = 1
                terms[tuple(e)] = r[k]
        linear.append(Poly(gens, terms))
    colls = primitive_collections(fan)
    monos = []
    for s in colls:
        e = [0] * fan.nrays
        for i in s:
            e[i] = 1
        monos.append(Poly.monomial(gens, tuple(e)))
    return SRPresentation(gens, linear, monos, colls)


@dataclass
class DivisorClassData:
    """Ray divisor classes R_i = sum_j a[i][j] m_j in a nef basis m_j.

    ``a[i][j]`` is also the intersection number R_i . beta_j with the dual
    curve basis.
    """
    names: Tuple[str, ...]
    a: List[List[int]]
    curve_names: Tuple[str, ...] = ()

    def __post_init__(self):
        self.names = tuple(self.names)
        if not self.curve_names:
            self.curve_names = tuple(f"beta{j + 1}" for j in range(len(self.names)))
        if any(len(row) != len(self.names) for row in self.a):
            raise StructuralError("divisor coefficient rows do not match the basis size")

    @property
    def rank(self) -> int:
        return len(self.names)

    @property
    def c1(self) -> Tuple[int, ...]:
        return tuple(sum(row[j] for row in self.a) for j in range(self.rank))

    @property
    def novikov_degrees(self) -> Dict[str, int]:
        return {f"q{j + 1}": 2 * c for j, c in enumerate(self.c1)}

    def ray_class(self, i: int) -> Poly:
        terms = {}
        for j, c in enumerate(self.a[i]):
            if c:
                e = [0] * self.rank
                e[j] = 1
                terms[tuple(e)] = c
        return Poly(self.names, terms)

    def check(self, fan: Fan) -> None:
        """Raise unless each column of ``a`` is a linear relation among the rays."""
        if len(self.a) != fan.nrays:
            raise StructuralError(f"{len(self.a)} divisor rows for {fan.nrays} rays")
        for j in range(self.rank):
            for k in range(fan.dim):
                if sum(self.a[i][j] * fan.rays[i][k] for i in range(fan.nrays)):
                    raise StructuralError(
                        f"column {self.names[j]} is not a relation among the rays")
        if linalg.rank(self.a) != self.rank:
            raise StructuralError("divisor classes do not span the chosen basis")
        if self.rank != fan.nrays - fan.dim:
            raise StructuralError("Picard rank does not match rays minus dimension")

    def relations(self, fan: Fan) -> List[Poly]:
        """Stanley-Reisner relations rewritten in the nef basis."""
        sr = stanley_reisner_presentation(fan)
        out = []
        for s in sr.collections:
            p = Poly.one(self.names)
            for i in s:
                p = p * self.ray_class(i)
            out.append(p)
        return out

    def point_class(self, fan: Fan, cone: Optional[Sequence[int]] = None) -> Poly:
        """Product of the ray classes of one maximal cone (the class of a point)."""
        cone = cone if cone is not None else fan.cones[0]
        p = Poly.one(self.names)
        for i in cone:
            p = p * self.ray_class(i)
        return p


def intersection_degrees(data: DivisorClassData, beta: Sequence[int]) -> Tuple[int, ...]:
    if len(beta) != data.rank:
        raise StructuralError(f"curve class has {len(beta)} entries, expected {data.rank}")
    return tuple(sum(row[j] * beta[j] for j in range(data.rank)) for row in data.a)


# ---------------------------------------------------------------------------
# equivalence


def unimodular_match(a: Fan, b: Fan) -> Optional[Tuple[List[List[int]], List[int]]]:
    """Find g in GL(n, Z) and a ray bijection p with g a.rays[i] = b.rays[p[i]].

    Cones must correspond as well.  Returns (g, p) or None.
    """
    if a.dim != b.dim or a.nrays != b.nrays or len(a.cones) != len(b.cones):
        return None
    base = next((c for c in a.cones if len(c) == a.dim
                 and abs(linalg.det(a.ray_matrix(c))) == 1), None)
    if base is None:
        raise UnsupportedFan("unimodular matching needs a smooth maximal cone")
    a_inv = linalg.inverse(linalg.transpose(a.ray_matrix(base)))
    b_index = {r: i for i, r in enumerate(b.rays)}
    b_cones = b.cone_set()
    for target in permutations(range(b.nrays), a.dim):
        bm = linalg.transpose(b.ray_matrix(target))
        g = linalg.matmul(bm, a_inv)
        if any(not isinstance(x, int) for row in g for x in row):
            continue
        if abs(linalg.det(g)) != 1:
            continue
        p = []
        for r in a.rays:
            img = tuple(linalg.matvec(g, list(r)))
            if img not in b_index:
                break
            p.append(b_index[img])
        else:
            if {frozenset(p[i] for i in c) for c in a.cones} == b_cones:
                return g, p
    return None


# ---------------------------------------------------------------------------
# small resolutions


def _cone_triangulations(fan: Fan, cone: Sequence[int]) -> List[List[Tuple[int, ...]]]:
    """All unimodular triangulations of a cone that use only its own rays."""
    d = fan.dim
    facets = cone_facets(fan, cone)
    simplices = [s for s in combinations(sorted(cone), d)
                 if abs(linalg.det(fan.ray_matrix(s))) == 1]

    def on_boundary(face):
        return any(face <= f for f, _ in facets)

    def side(face, apex):
        (u,) = linalg.nullspace(fan.ray_matrix(face), d)
        v = sum(a * b for a, b in zip(u, fan.rays[apex]))
        return (v > 0) - (v < 0)

    for k in range(1, len(simplices) + 1):
        found = []
        for combo in combinations(simplices, k):
            faces: Dict[FrozenSet[int], List[int]] = {}
            for s in combo:
                for x in s:
                    faces.setdefault(frozenset(s) - {x}, []).append(x)
            ok = True
            for face, apexes in faces.items():
                if on_boundary(face):
                    ok = len(apexes) == 1
                else:
                    ok = len(apexes) == 2 and side(tuple(face), apexes[0]) * side(tuple(face), apexes[1]) < 0
                if not ok:
                    break
            if ok:
                found.append(list(combo))
        if found:
            return found
    return []


def small_resolutions(fan: Fan, limit: int = 10000) -> List[Fan]:
    """Every smooth fan refining ``fan`` without new rays (cones sorted)."""
    choices = []
    for c in fan.cones:
        if len(c) == fan.dim and abs(linalg.det(fan.ray_matrix(c))) == 1:
            choices.append([[c]])
        else:
            tri = _cone_triangulations(fan, c)
            if not tri:
                return []
            choices.append(tri)
    out = []

    def extend(i, chosen):
        if len(out) >= limit:
            return
        if i == len(choices):
            count: Dict[FrozenSet[int], int] = {}
            for s in chosen:
                for x in s:
                    f = frozenset(s) - {x}
                    count[f] = count.get(f, 0) + 1
            if all(v == 2 for v in count.values()):
                out.append(Fan.make(fan.rays, sorted(chosen)))
            return
        for t in choices[i]:
            extend(i + 1, chosen + t)

    extend(0, [])
    return out
