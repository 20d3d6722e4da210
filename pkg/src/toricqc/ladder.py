"""Ladder diagrams of partial flag varieties and their toric fans."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import linalg
from .errors import ConstructionFailure, StructuralError
from .toric import DivisorClassData, Fan, primitive_collections, small_resolutions, validate_fan

__all__ = ["LadderDiagram", "ladder_diagram", "ladder_fans", "match_coordinates", "LadderFans"]

Vertex = Tuple[int, int]
Edge = Tuple[Vertex, Vertex]


@dataclass
class LadderDiagram:
    n: int
    steps: Tuple[int, ...]
    dots: List[Vertex]
    stars: List[Vertex]
    edges: List[Edge]
    roofs: List[List[Edge]]
    boxes: List[Tuple[Vertex, Vertex, Vertex, Vertex]]
    corners: List[List[Edge]]
    upper_corners: List[List[Edge]]

    def ray(self, e: Edge) -> Tuple[int, ...]:
        v = [0] * len(self.dots)
        index = {d: i for i, d in enumerate(self.dots)}
        t, h = e
        if h in index:
            v[index[h]] += 1
        if t in index:
            v[index[t]] -= 1
        return tuple(v)

    def rays(self) -> List[Tuple[int, ...]]:
        return [self.ray(e) for e in self.edges]

    def relation_sum(self, plus: Sequence[Edge], minus: Sequence[Edge] = ()) -> Tuple[int, ...]:
        total = [0] * len(self.dots)
        for e in plus:
            total = [a + b for a, b in zip(total, self.ray(e))]
        for e in minus:
            total = [a - b for a, b in zip(total, self.ray(e))]
        return tuple(total)

    def curve_classes(self) -> List[List[int]]:
        """Intersection numbers R_e . C for the roof classes then the box classes."""
        out = []
        for roof in self.roofs:
            out.append([1 if e in roof else 0 for e in self.edges])
        for cb, cm in zip(self.corners, self.upper_corners):
            out.append([(1 if e in cb else 0) - (1 if e in cm else 0) for e in self.edges])
        return out

    def divisor_data(self) -> DivisorClassData:
        classes = self.curve_classes()
        a = [[c[i] for c in classes] for i in range(len(self.edges))]
        names = tuple(f"m{j + 1}" for j in range(len(classes)))
        return DivisorClassData(names, a)


def ladder_diagram(n: int, steps: Sequence[int]) -> LadderDiagram:
    steps = tuple(int(s) for s in steps)
    if not steps or any(b <= a for a, b in zip((0,) + steps, steps + (n,))):
        raise StructuralError(f"need 0 < n_1 < ... < n_l < n, got n={n}, steps={list(steps)}")
    dots = set()
    for np_ in steps:
        for i in range(n - np_):
            for j in range(np_):
                dots.add((i, j))
    ext = (0,) + steps + (n,)
    stars = [(n - ext[k + 1], ext[k]) for k in range(len(steps) + 1)]
    dots = sorted(dots)
    verts = set(dots) | set(stars)
    edges = []
    for t in sorted(verts):
        for d in ((1, 0), (0, -1)):
            h = (t[0] + d[0], t[1] + d[1])
            if h in verts and not (t in stars and h in stars):
                edges.append((t, h))
    roofs = []
    for i in range(1, len(steps) + 1):
        ni, nnext, nprev = ext[i], ext[i + 1], ext[i - 1]
        roof = [((n - nnext, ni), (n - nnext, ni - 1))]
        roof += [((p, ni - 1), (p + 1, ni - 1)) for p in range(n - nnext, n - ni - 1)]
        roof += [((n - ni - 1, q), (n - ni - 1, q - 1)) for q in range(ni - 1, nprev, -1)]
        roof.append(((n - ni - 1, nprev), (n - ni, nprev)))
        for e in roof:
            if e not in edges:
                raise ConstructionFailure(f"roof {i} uses {e}, which is not an edge")
        roofs.append(roof)
    boxes, corners, uppers = [], [], []
    for (i, j) in sorted(verts):
        b = ((i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1))
        if all(v in verts for v in b):
            boxes.append(b)
            corners.append([((i, j + 1), (i, j)), ((i, j), (i + 1, j))])
            uppers.append([((i, j + 1), (i + 1, j + 1)), ((i + 1, j + 1), (i + 1, j))])
    return LadderDiagram(n, steps, dots, stars, edges, roofs, boxes, corners, uppers)


def _facets(rays: List[Tuple[int, ...]]) -> Dict[Tuple[int, ...], Tuple]:
    """Facets of conv(rays) as vertex set -> normal u with <u, facet> = 1.

    Assumes 0 is an interior point.
    """
    d = len(rays[0])
    found = {}
    for sub in combinations(range(len(rays)), d):
        m = [list(rays[i]) for i in sub]
        u = linalg.solve(m, [1] * d)
        if u is None or linalg.rank(m) != d:
            continue
        vals = [sum(Fraction(a) * b for a, b in zip(u, r)) for r in rays]
        if all(v <= 1 for v in vals):
            found.setdefault(tuple(i for i, v in enumerate(vals) if v == 1), tuple(u))
    return dict(sorted(found.items()))


@dataclass
class LadderFans:
    diagram: LadderDiagram
    sing: Fan
    res: Fan
    candidates: List[Fan]
    reflexive: bool

    def recipe_index(self) -> int:
        """Position of the recipe's fan among all small resolutions."""
        target = self.res.cone_set()
        return next(i for i, c in enumerate(self.candidates) if c.cone_set() == target)


def ladder_fans(n: int, steps: Sequence[int]) -> LadderFans:
    """Singular fan over the faces of conv(r_e) and its subdivision with roofs
    and corners as primitive collections."""
    lad = ladder_diagram(n, steps)
    rays = lad.rays()
    d = len(lad.dots)
    if len(set(rays)) != len(rays):
        raise ConstructionFailure("two edges give the same ray")
    for roof in lad.roofs:
        if any(lad.relation_sum(roof)):
            raise ConstructionFailure(f"roof relation fails for {roof}")
    for cb, cm in zip(lad.corners, lad.upper_corners):
        if any(lad.relation_sum(cb, cm)):
            raise ConstructionFailure(f"box relation fails for {cb}")
    normals = _facets(rays)
    facets = list(normals)
    reflexive = all(isinstance(x, int) for u in normals.values() for x in u)
    sing = Fan.make(rays, facets)
    index = {e: i for i, e in enumerate(lad.edges)}
    forbidden = [frozenset(index[e] for e in s) for s in lad.roofs + lad.corners]
    cones = []
    for s in combinations(range(len(rays)), d):
        fs = frozenset(s)
        if any(f <= fs for f in forbidden):
            continue
        if linalg.rank([list(rays[i]) for i in s]) != d:
            continue
        if not any(fs <= set(f) for f in facets):
            raise ConstructionFailure(f"cone {sorted(fs)} is not inside a cone of the singular fan")
        cones.append(s)
    res = Fan.make(rays, cones)
    report = validate_fan(res)
    if not (report.smooth and report.pseudo_complete):
        raise ConstructionFailure(f"resolution fan fails validation: {report.to_dict()}")
    prim = {frozenset(p) for p in primitive_collections(res)}
    if not all(f in prim for f in forbidden):
        raise ConstructionFailure("roofs and corners are not all primitive collections")
    candidates = small_resolutions(sing)
    if not any(c.cone_set() == res.cone_set() for c in candidates):
        raise ConstructionFailure("recipe fan is not a small resolution of the singular fan")
    return LadderFans(lad, sing, res, candidates, reflexive)


def match_coordinates(fan: Fan, target: Fan) -> Optional[Tuple[Tuple[int, ...], List[int]]]:
    """Coordinate permutation and ray bijection making ``fan`` equal to ``target``.

    Returns (perm, ray_map) where coordinate k of ``fan`` becomes coordinate
    perm[k] of ``target`` and ray i of ``fan`` is ray ray_map[i] of ``target``.
    """
    if fan.dim != target.dim or fan.nrays != target.nrays:
        return None
    tindex = {r: i for i, r in enumerate(target.rays)}
    tcones = target.cone_set()
    for perm in permutations(range(fan.dim)):
        mapped = []
        for r in fan.rays:
            v = [0] * fan.dim
            for k, x in enumerate(r):
                v[perm[k]] = x
            mapped.append(tuple(v))
        if any(v not in tindex for v in mapped):
            continue
        rmap = [tindex[v] for v in mapped]
        if {frozenset(rmap[i] for i in c) for c in fan.cones} == tcones:
            return perm, rmap
    return None
