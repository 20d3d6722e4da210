"""Loading the shipped data files: fans, printed matrices, product lists,
operator lists and the tables describing each transition.

Set ``TORICQC_FIXTURES`` to read them from another directory.
"""

from __future__ import annotations

import copy
import json
import os
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Mapping, Sequence, Tuple

from .algebra import linalg, parse_expression, parse_poly
from .algebra.poly import Poly, norm_coeff
from .algebra.rational import RationalFunction
from .errors import StructuralError
from .graded_ring import GradedRing, Presentation
from .toric import Fan, read_fan

__all__ = [
    "fixture_dir", "list_fixtures", "load_fixture", "load_fan", "parse_matrix", "corrected_matrix",
    "printed_matrix", "class_vector", "product_vector", "oracle_vector", "dump_matrix",
]

ENV_VAR = "TORICQC_FIXTURES"


def fixture_dir() -> Path:
    override = os.environ.get(ENV_VAR)
    if override:
        return Path(override)
    return Path(__file__).resolve().parent / "fixtures"


def list_fixtures() -> List[str]:
    d = fixture_dir()
    return sorted(p.name for p in d.iterdir() if p.suffix in (".json", ".fan"))


def _path(name: str, suffix: str) -> Path:
    p = fixture_dir() / name
    if not p.suffix:
        p = p.with_suffix(suffix)
    if not p.exists():
        raise FileNotFoundError(f"no fixture {p.name} in {fixture_dir()}")
    return p


@lru_cache(maxsize=None)
def _load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def load_fixture(name: str) -> dict:
    """A JSON fixture by name (``"gr25"`` or ``"gr25.json"``); callers get a private copy."""
    return copy.deepcopy(_load_json(str(_path(name, ".json"))))


def load_fan(name: str) -> Fan:
    return read_fan(_path(name, ".fan"))


# ---------------------------------------------------------------------------
# entries and vectors


def _entry(text: str, variables: Sequence[str]):
    r = parse_expression(text, tuple(variables))
    if r.is_zero():
        return 0
    return r


def parse_matrix(rows: Sequence[Sequence[str]], variables: Sequence[str]) -> List[list]:
    """Matrix of expressions; zero entries become the integer 0."""
    return [[_entry(x, variables) for x in row] for row in rows]


def printed_matrix(section: Mapping, element: str) -> List[list]:
    return parse_matrix(section["matrices"][element], section["variables"])


def corrected_matrix(section: Mapping, element: str) -> List[list]:
    """The printed matrix with the recorded corrections applied (1-based positions)."""
    m = printed_matrix(section, element)
    for fix in section.get("corrections", {}).get(element, []):
        r, c = fix["row"] - 1, fix["col"] - 1
        printed = _entry(fix["printed"], section["variables"])
        if not _same(m[r][c], printed):
            raise StructuralError(f"correction at ({fix['row']},{fix['col']}) does not match "
                                  f"the printed entry")
        m[r][c] = _entry(fix["corrected"], section["variables"])
    return m


def _same(x, y) -> bool:
    if not x and not y:
        return True
    if not x or not y:
        return False
    return x == y


def class_vector(text: str, presentation: Presentation) -> list:
    """Coordinates of a polynomial class (in the generators) in the presentation's basis."""
    p = parse_poly(text, presentation.generators)
    return presentation.normal_form(p)


def product_vector(text: str, presentation: Presentation, variables: Sequence[str]) -> list:
    """Coordinates of an expression mixing classes and Novikov variables, such as
    ``m1^4*m2 + q1*q2`` or ``m2*(m1-m2)*q2/(1-q2)``; entries are rational in q."""
    gens = tuple(presentation.generators)
    qs = tuple(variables)
    names = gens + qs
    r = parse_expression(text, names)
    den = [(_drop(f, len(gens), qs), m) for f, m in r.den]
    parts: Dict[Tuple[int, ...], Dict[Tuple[int, ...], object]] = {}
    for e, c in r.num.terms.items():
        parts.setdefault(e[:len(gens)], {})[e[len(gens):]] = c
    out: List[object] = [0] * len(presentation.basis)
    for mono, coeff in parts.items():
        v = presentation.normal_form(Poly(gens, {mono: 1}))
        f = RationalFunction(Poly(qs, coeff), den)
        for k, x in enumerate(v):
            if x:
                out[k] = out[k] + f * x if out[k] else f * x
    return [x if x else 0 for x in out]


def _drop(f: Poly, k: int, names: Tuple[str, ...]) -> Poly:
    terms = {}
    for e, c in f.terms.items():
        if any(e[:k]):
            raise StructuralError("denominators may only involve Novikov variables")
        terms[e[k:]] = c
    return Poly(names, terms)


def oracle_vector(text: str, ring: GradedRing, generators: Mapping[str, Sequence[object]]) -> list:
    """Coordinates of a polynomial in named classes, multiplied classically in ``ring``."""
    names = tuple(generators)
    p = parse_poly(text, names)
    cl = ring.classical_limit()
    out = [0] * ring.dim
    for e, c in p.terms.items():
        v = cl.basis_vector(cl.unit)
        for name, k in zip(names, e):
            for _ in range(k):
                v = cl.product(v, list(generators[name]))
        out = [norm_coeff(x + c * y) for x, y in zip(out, v)]
    return out


def dump_matrix(m: Sequence[Sequence[object]]) -> List[List[str]]:
    from .graded_ring import format_entry
    return [[format_entry(x) if x else "0" for x in row] for row in m]


def vectors(texts: Sequence[str], presentation: Presentation) -> List[list]:
    return [class_vector(t, presentation) for t in texts]


def span_of(texts: Sequence[str], presentation: Presentation) -> List[list]:
    return linalg.span_basis(vectors(texts, presentation))
