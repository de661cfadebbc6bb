"""Command-line surface.

    bearingrig analyze <file> [--tol-rank R] [--tol-collinear C] [--format json]
    bearingrig spectrum <file>
    bearingrig simulate <file> --dt 0.01 --t-end 50 [--initial <file> | --seed S] --out trace.csv
    bearingrig grow <file> --position x,y[,z...] --targets i,j[,k...]
    bearingrig lift <file> --dim D
    bearingrig gen --kind lff|cycle|random --n N --d D --seed S [--graph <file>]
    bearingrig check <file> --property acyclic|spanning-root|lff|prop2|prop3

Exit codes: 0 success, 2 validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    Tolerances,
    acyclic_nonequivalence_conditions,
    classify_equivalence,
    eigenvalues,
    geometric_lff,
    two_edge_sufficient_condition,
)
from .dynamics import simulate, target_from_configuration
from .errors import InputError, NotAcyclicError, NumericalError
from .geometry import (
    Configuration,
    DEFAULT_BOX,
    GenSpec,
    generate,
    grow,
    lift,
)
from .graphs import is_acyclic, lff_structure, spanning_root
from .io import (
    export_trace,
    formation_to_document,
    input_digest,
    parse_formation,
    serialize_report,
)
from .operators import bearing_laplacian_blocks

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _load(path: str):
    text = Path(path).read_text(encoding="utf-8")
    formation, target = parse_formation(text)
    return text, formation, target


def _print_doc(doc: dict) -> None:
    print(json.dumps(doc, indent=2, sort_keys=True))


def _cmd_analyze(args) -> int:
    text, formation, _ = _load(args.file)
    tol = Tolerances(rank_rel=args.tol_rank, collinear=args.tol_collinear)
    report = classify_equivalence(formation, tol)
    print(serialize_report(report, digest=input_digest(text)))
    return EXIT_OK


def _cmd_spectrum(args) -> int:
    _, formation, _ = _load(args.file)
    spec = eigenvalues(bearing_laplacian_blocks(formation))
    print(json.dumps([[z.real, z.imag] for z in spec]))
    return EXIT_OK


def _cmd_simulate(args) -> int:
    _, formation, target = _load(args.file)
    if target is None:
        target = target_from_configuration(formation.graph, formation.config)
    if args.initial is not None:
        _, init_formation, _ = _load(args.initial)
        if init_formation.d != formation.d or init_formation.n != formation.n:
            raise InputError("initial formation has mismatched size or dimension")
        p0 = init_formation.config
    elif args.seed is not None:
        rng = np.random.default_rng(args.seed)
        p0 = Configuration(rng.uniform(0.0, DEFAULT_BOX, (formation.n, formation.d)))
    else:
        p0 = formation.config
    trace = simulate(target, p0, args.dt, args.t_end)
    Path(args.out).write_text(export_trace(trace), encoding="utf-8")
    print(
        f"verdict: {trace.verdict} "
        f"(final bearing error {trace.bearing_errors[-1]:.6e}, "
        f"{len(trace.times)} samples written to {args.out})"
    )
    return EXIT_OK


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise InputError(f"expected comma-separated numbers, got {text!r}") from exc


def _parse_ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise InputError(f"expected comma-separated integers, got {text!r}") from exc


def _cmd_grow(args) -> int:
    _, formation, _ = _load(args.file)
    grown = grow(formation, np.array(_parse_floats(args.position)), _parse_ints(args.targets))
    _print_doc(formation_to_document(grown))
    return EXIT_OK


def _cmd_lift(args) -> int:
    _, formation, _ = _load(args.file)
    _print_doc(formation_to_document(lift(formation, args.dim)))
    return EXIT_OK


def _cmd_gen(args) -> int:
    kind_map = {
        "lff": "lff",
        "cycle": "directed_cycle_with_chords",
        "random": "random_positions_on_graph",
    }
    graph = None
    if args.graph is not None:
        _, graph_formation, _ = _load(args.graph)
        graph = graph_formation.graph
    if kind_map[args.kind] == "random_positions_on_graph" and graph is None:
        raise InputError("--kind random requires --graph <file>")
    spec = GenSpec(
        kind=kind_map[args.kind],
        n=args.n if graph is None else graph.n,
        d=args.d,
        seed=args.seed,
        graph=graph,
    )
    _print_doc(formation_to_document(generate(spec)))
    return EXIT_OK


def _cmd_check(args) -> int:
    _, formation, _ = _load(args.file)
    g = formation.graph
    prop = args.property
    if prop == "acyclic":
        block = {"acyclic": is_acyclic(g)}
    elif prop == "spanning-root":
        root = spanning_root(g)
        block = {"spanning_root_exists": root is not None, "root": root}
    elif prop == "lff":
        structure = lff_structure(g)
        block = {
            "is_structural_lff": structure.is_structural_lff,
            "is_lff": geometric_lff(formation),
            "leader": structure.leader,
            "first_follower": structure.first_follower,
        }
    elif prop == "prop2":
        try:
            screens = acyclic_nonequivalence_conditions(formation)
        except NotAcyclicError:
            block = {"applicable": False, "reason": "graph contains a directed cycle"}
        else:
            block = {
                "applicable": True,
                "cond_I": screens.cond_I,
                "cond_II": screens.cond_II,
                "cond_III": screens.cond_III,
                "witnesses_I": screens.witnesses_I,
                "witnesses_II": screens.witnesses_II,
                "witnesses_III": screens.witnesses_III,
                "witnesses_III_with_single": screens.witnesses_III_with_single,
            }
    elif prop == "prop3":
        block = {"two_edge_sufficient": two_edge_sufficient_condition(formation)}
    else:  # pragma: no cover - argparse choices guard this
        raise InputError(f"unknown property {prop!r}")
    block["property"] = prop
    _print_doc(block)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bearingrig",
        description="Bearing rigidity and bearing Laplacian toolkit for directed formations",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="classify a formation and print a JSON report")
    p.add_argument("file")
    p.add_argument("--tol-rank", type=float, default=Tolerances().rank_rel)
    p.add_argument("--tol-collinear", type=float, default=Tolerances().collinear)
    p.add_argument("--format", choices=["json"], default="json")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("spectrum", help="print bearing Laplacian eigenvalues as [re, im] pairs")
    p.add_argument("file")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("simulate", help="integrate the formation flow and export a CSV trace")
    p.add_argument("file")
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--t-end", type=float, default=50.0)
    p.add_argument("--initial", default=None, help="formation document supplying p(0)")
    p.add_argument("--seed", type=int, default=None, help="random p(0) in the default box")
    p.add_argument("--out", required=True, help="trace CSV output path")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("grow", help="append a vertex with out-edges to existing targets")
    p.add_argument("file")
    p.add_argument("--position", required=True, help="comma-separated coordinates")
    p.add_argument("--targets", required=True, help="comma-separated vertex ids")
    p.set_defaults(func=_cmd_grow)

    p = sub.add_parser("lift", help="zero-pad the formation into a higher dimension")
    p.add_argument("file")
    p.add_argument("--dim", type=int, required=True)
    p.set_defaults(func=_cmd_lift)

    p = sub.add_parser("gen", help="generate a seeded random formation document")
    p.add_argument("--kind", choices=["lff", "cycle", "random"], required=True)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--graph", default=None, help="formation document whose edges to reuse")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("check", help="evaluate one structural property flag block")
    p.add_argument("file")
    p.add_argument(
        "--property",
        choices=["acyclic", "spanning-root", "lff", "prop2", "prop3"],
        required=True,
    )
    p.set_defaults(func=_cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
