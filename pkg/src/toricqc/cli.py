"""Command-line entry point.

    toricqc run gr25 --format json --out report.json
    toricqc run ladder 5 2 --out fans/
    toricqc matrices gr24 --out gr24_matrices.json
    toricqc diff computed.json gr24:resolution:m1
    toricqc fan validate path/to.fan
    toricqc fixtures list
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .errors import StructuralError, TheoremViolation, ToricQCError
from .examples import EXAMPLES, RunConfig, diff_matrices, resolution, run_example, run_ladder
from .fixtures import dump_matrix, fixture_dir, list_fixtures, load_fixture, parse_matrix
from .toric import primitive_collections, read_fan, validate_fan, write_fan
from .transition import TransitionReport

log = logging.getLogger("toricqc")

EXIT_OK, EXIT_CHECKS, EXIT_THEOREM, EXIT_INPUT = 0, 1, 2, 3


def _ints(text: str) -> tuple:
    return tuple(int(x) for x in text.replace(" ", "").split(",") if x)


def _matrix_text(label: str, basis: Sequence[str], m: Sequence[Sequence[str]]) -> List[str]:
    width = max(len(x) for row in m for x in row)
    width = max(width, 1)
    lines = [f"{label}  (rows and columns: {', '.join(basis)})"]
    for row in m:
        lines.append("  [" + "  ".join(x.rjust(width) for x in row) + "]")
    return lines


def render_text(report: TransitionReport) -> str:
    lines = [f"== {report.name}: {'all checks pass' if report.ok else 'CHECKS FAILED'} =="]
    for key, v in report.checks.items():
        lines.append(f"{'PASS' if v else 'FAIL'}  {key}: {v.message}")
        if not v and v.witness is not None:
            lines.append(f"      witness: {v.witness}")
    data = report.data
    basis = data.get("basis")
    if basis:
        for el, m in data.get("quantum_matrices", {}).items():
            lines.append("")
            lines.extend(_matrix_text(f"{el} *", basis, m))
        if "N" in data:
            lines.append("")
            lines.extend(_matrix_text(f"N ({data['convention']})", basis, data["N"]))
        for var, m in data.get("residues", {}).get("matrices", {}).items():
            if "N" not in data:
                lines.append("")
                lines.extend(_matrix_text(f"N for {var} ({data['convention']})", basis, m))
    filt = data.get("filtration")
    if filt:
        lines.append("")
        lines.append(f"dim V = {filt['dim_V']}, dim W = {filt['dim_W']}")
    wf = data.get("weight_filtration")
    if wf:
        blocks = ", ".join(f"{n} of size {k}" for k, n in wf["jordan_blocks"].items())
        lines.append(f"Jordan blocks: {blocks}")
    for key in ("resolution_printed_differences", "smoothing_printed_differences"):
        for el, diff in data.get(key, {}).items():
            entries = diff["entries"] if isinstance(diff, dict) else diff
            lines.append(f"printed {el}* differs from the computed matrix at "
                         + ", ".join(f"({r},{c})" for r, c, *_ in entries))
    for key in ("rays", "cones", "small_resolutions", "resolution_matches_exactly",
                "resolution_matches_unimodular"):
        if key in data:
            lines.append(f"{key}: {data[key]}")
    return "\n".join(lines) + "\n"


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_run(args) -> int:
    if args.example == "ladder":
        if len(args.params) < 2:
            raise SystemExit("usage: run ladder N STEP [STEP ...]")
        n, steps = int(args.params[0]), tuple(int(x) for x in args.params[1:])
        out_dir = args.out if args.out and not args.out.endswith(".json") else None
        report = run_ladder(n, steps, out_dir)
        text = _render(report, args.format)
        if out_dir:
            (Path(out_dir) / f"{report.name}.{'json' if args.format == 'json' else 'txt'}"
             ).write_text(text)
        else:
            _emit(text, args.out)
        return EXIT_OK if report.ok else EXIT_CHECKS
    config = RunConfig(args.example, _ints(args.truncation) if args.truncation else None,
                       args.convention, tuple(args.ansatz) if args.ansatz else None)
    try:
        report = run_example(config)
    except TheoremViolation as exc:
        report = TransitionReport(args.example)
        report.data["theorem_violation"] = {"message": str(exc), "report": exc.report}
        _emit(_render(report, args.format), args.out)
        log.error("theorem violation: %s", exc)
        return EXIT_THEOREM
    _emit(_render(report, args.format), args.out)
    return EXIT_OK if report.ok else EXIT_CHECKS


def _render(report: TransitionReport, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2, sort_keys=True, default=str) + "\n"
    return render_text(report)


def cmd_matrices(args) -> int:
    res = resolution(args.example, _ints(args.truncation) if args.truncation else None,
                     args.ansatz or None)
    sec = res.section
    out = []
    for k, qm in enumerate(res.extraction.matrices):
        d = qm.to_dict()
        d["element"] = sec["generators"][k]
        d["basis"] = list(sec["basis"])
        d["entries"] = dump_matrix(qm.entries)
        out.append(d)
    _emit(json.dumps(out, indent=2) + "\n", args.out)
    return EXIT_OK


def _load_matrix(ref: str):
    """A QuantumMatrix file (path[#element]) or a fixture reference name:section:element."""
    path, _, element = ref.partition("#")
    if Path(path).exists():
        data = json.loads(Path(path).read_text())
        if isinstance(data, list):
            data = next((d for d in data if not element or d["element"] == element), None)
            if data is None:
                raise StructuralError(f"no matrix {element!r} in {path}")
        return parse_matrix(data["entries"], data.get("variables", ()))
    parts = ref.split(":")
    if len(parts) == 3:
        name, section, el = parts
        sec = load_fixture(name)[section]
        return parse_matrix(sec["matrices"][el], sec["variables"])
    raise StructuralError(f"cannot read a matrix from {ref!r}")


def cmd_diff(args) -> int:
    diffs = diff_matrices(_load_matrix(args.computed), _load_matrix(args.fixture))
    if args.format == "json":
        _emit(json.dumps({"equal": not diffs, "differences": [
            {"row": r, "col": c, "computed": a, "fixture": b} for r, c, a, b in diffs]},
            indent=2) + "\n", args.out)
    else:
        lines = ["equal" if not diffs else f"{len(diffs)} entries differ"]
        lines += [f"  ({r},{c}): {a}  vs  {b}" for r, c, a, b in diffs]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if not diffs else EXIT_CHECKS


def cmd_fan(args) -> int:
    path = Path(args.path)
    if not path.exists():
        path = fixture_dir() / (args.path if args.path.endswith(".fan") else args.path + ".fan")
    fan = read_fan(path)
    if args.action == "print":
        _emit(write_fan(fan), args.out)
        return EXIT_OK
    rep = validate_fan(fan)
    d = rep.to_dict()
    d["primitive_collections"] = [[i + 1 for i in c] for c in primitive_collections(fan)] \
        if rep.simplicial else None
    if args.format == "json":
        _emit(json.dumps(d, indent=2) + "\n", args.out)
    else:
        _emit("\n".join(f"{k}: {v}" for k, v in d.items()) + "\n", args.out)
    return EXIT_OK if rep.smooth and rep.pseudo_complete else EXIT_CHECKS


def cmd_fixtures(args) -> int:
    _emit("\n".join([str(fixture_dir())] + [f"  {n}" for n in list_fixtures()]) + "\n", None)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toricqc", description="Quantum cohomology of toric "
                                "degenerations and their extremal transitions.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, example=True):
        if example:
            sp.add_argument("--truncation", help="comma separated orders per Novikov variable")
            sp.add_argument("--ansatz", action="append",
                            help="denominator factor such as 1-q2 (repeatable)")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--out", help="output file (directory for ladder fans)")

    r = sub.add_parser("run", help="run an example pipeline")
    r.add_argument("example", choices=EXAMPLES + ("ladder",))
    r.add_argument("params", nargs="*", help="for ladder: N followed by the steps")
    r.add_argument("--convention", choices=("plain", "dlog"))
    common(r)
    r.set_defaults(func=cmd_run)

    m = sub.add_parser("matrices", help="write the computed divisor matrices")
    m.add_argument("example", choices=EXAMPLES)
    common(m)
    m.set_defaults(func=cmd_matrices)

    d = sub.add_parser("diff", help="compare two matrices entry by entry")
    d.add_argument("computed", help="matrix file (path[#element]) or name:section:element")
    d.add_argument("fixture", help="matrix file (path[#element]) or name:section:element")
    common(d, example=False)
    d.set_defaults(func=cmd_diff)

    f = sub.add_parser("fan", help="validate or print a fan file")
    f.add_argument("action", choices=("validate", "print"))
    f.add_argument("path", help="fan file or fixture name")
    common(f, example=False)
    f.set_defaults(func=cmd_fan)

    x = sub.add_parser("fixtures", help="list shipped fixtures")
    x.add_argument("action", choices=("list",))
    x.set_defaults(func=cmd_fixtures)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (StructuralError, FileNotFoundError, KeyError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except ToricQCError as exc:
        # truncation, ansatz or fan choices the computation cannot work with
        log.error("%s: %s", type(exc).__name__, exc)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
