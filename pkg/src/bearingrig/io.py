"""JSON formation/report documents and CSV trace export.

A formation document looks like

    {
      "dimension": 2,
      "vertices": [{"id": 1, "position": [0.0, 0.0]}, ...],
      "edges": [[2, 1], [3, 1], [3, 2]],
      "target": {"positions": [...]} | {"bearings": [[...], ...]}   # optional
    }

The optional target block either restates positions (bearings are computed
and frozen from them) or gives one unit bearing per edge directly.  Reports
are deterministic JSON with sorted keys; every float round-trips exactly
because json serializes Python floats via repr.  Traces are plain numeric
CSV for external plotting.
"""

from __future__ import annotations

import hashlib
import json
from datetime import datetime, timezone

import numpy as np

from . import __version__ as _version
from .analysis import EquivalenceReport
from .dynamics import SimulationTrace, TargetSpec, target_from_configuration
from .errors import InputError, ParseError, SchemaError, ValidationError
from .geometry import Configuration, DirectedFormation
from .graphs import validate_graph


def _expect(obj, kind, path: str):
    if not isinstance(obj, kind):
        names = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise SchemaError(f"expected {names}, got {type(obj).__name__}", path)
    return obj


def _number(obj, path: str) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise SchemaError(f"expected a number, got {type(obj).__name__}", path)
    return float(obj)


def _positions_from_vertex_list(items, dimension: int, path: str) -> np.ndarray:
    _expect(items, list, path)
    if not items:
        raise SchemaError("vertex list is empty", path)
    seen_ids = set()
    entries = []
    for idx, item in enumerate(items):
        vpath = f"{path}[{idx}]"
        _expect(item, dict, vpath)
        if "id" not in item or "position" not in item:
            raise SchemaError("vertex needs 'id' and 'position'", vpath)
        vid = item["id"]
        if isinstance(vid, bool) or not isinstance(vid, int):
            raise SchemaError("vertex id must be an integer", f"{vpath}.id")
        if vid in seen_ids:
            raise SchemaError(f"duplicate vertex id {vid}", f"{vpath}.id")
        seen_ids.add(vid)
        pos = _expect(item["position"], list, f"{vpath}.position")
        if len(pos) != dimension:
            raise SchemaError(
                f"position has length {len(pos)}, expected {dimension}",
                f"{vpath}.position",
            )
        entries.append((vid, [_number(x, f"{vpath}.position[{i}]") for i, x in enumerate(pos)]))
    n = len(entries)
    if sorted(vid for vid, _ in entries) != list(range(1, n + 1)):
        raise SchemaError(f"vertex ids must be exactly 1..{n}", path)
    points = np.zeros((n, dimension))
    for vid, pos in entries:
        points[vid - 1] = pos
    return points


def parse_formation_document(doc: dict) -> tuple[DirectedFormation, TargetSpec | None]:
    """Validate a decoded document into a formation and optional target."""
    _expect(doc, dict, "$")
    for key in ("dimension", "vertices", "edges"):
        if key not in doc:
            raise SchemaError(f"missing required key '{key}'", "$")
    dim = doc["dimension"]
    if isinstance(dim, bool) or not isinstance(dim, int):
        raise SchemaError("dimension must be an integer", "$.dimension")
    points = _positions_from_vertex_list(doc["vertices"], dim, "$.vertices")
    edges_raw = _expect(doc["edges"], list, "$.edges")
    edges = []
    for idx, e in enumerate(edges_raw):
        epath = f"$.edges[{idx}]"
        _expect(e, list, epath)
        if len(e) != 2 or any(isinstance(x, bool) or not isinstance(x, int) for x in e):
            raise SchemaError("edge must be a pair of integer vertex ids", epath)
        edges.append((e[0], e[1]))

    try:
        graph = validate_graph(len(points), edges)
        formation = DirectedFormation(graph, Configuration(points))
    except InputError as exc:
        raise ValidationError(f"invalid formation: {exc}") from exc
    except ValueError as exc:
        raise ValidationError(f"invalid formation: {exc}") from exc

    target = None
    if "target" in doc and doc["target"] is not None:
        tdoc = _expect(doc["target"], dict, "$.target")
        if "positions" in tdoc:
            tpoints = _positions_from_vertex_list(tdoc["positions"], dim, "$.target.positions")
            try:
                target = target_from_configuration(graph, Configuration(tpoints))
            except (InputError, ValueError) as exc:
                raise ValidationError(f"invalid target positions: {exc}") from exc
        elif "bearings" in tdoc:
            brs = _expect(tdoc["bearings"], list, "$.target.bearings")
            if len(brs) != graph.m:
                raise SchemaError(
                    f"need one bearing per edge ({graph.m}), got {len(brs)}",
                    "$.target.bearings",
                )
            rows = []
            for idx, b in enumerate(brs):
                bpath = f"$.target.bearings[{idx}]"
                _expect(b, list, bpath)
                if len(b) != dim:
                    raise SchemaError(f"bearing has length {len(b)}, expected {dim}", bpath)
                rows.append([_number(x, f"{bpath}[{i}]") for i, x in enumerate(b)])
            try:
                target = TargetSpec(graph, np.array(rows))
            except (InputError, ValueError) as exc:
                raise ValidationError(f"invalid target bearings: {exc}") from exc
        else:
            raise SchemaError("target needs 'positions' or 'bearings'", "$.target")
    return formation, target


def parse_formation(text: str) -> tuple[DirectedFormation, TargetSpec | None]:
    """Parse a JSON formation document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    return parse_formation_document(doc)


def formation_to_document(
    f: DirectedFormation, target: TargetSpec | None = None
) -> dict:
    doc = {
        "dimension": f.d,
        "vertices": [
            {"id": i + 1, "position": [float(x) for x in f.config.points[i]]}
            for i in range(f.n)
        ],
        "edges": [[i, j] for (i, j) in f.graph.edges],
    }
    if target is not None:
        doc["target"] = {
            "bearings": [[float(x) for x in row] for row in target.bearings]
        }
    return doc


def serialize_formation(f: DirectedFormation, target: TargetSpec | None = None) -> str:
    return json.dumps(formation_to_document(f, target), indent=2, sort_keys=True)


def input_digest(text: str) -> str:
    """Hex digest identifying the exact input document bytes."""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def report_to_document(
    r: EquivalenceReport,
    digest: str | None = None,
    timestamp: str | None = None,
) -> dict:
    """Flatten a report for serialization.

    The generated_at timestamp is informational only; determinism guarantees
    exclude it.  All other fields are pure functions of the input and the
    tolerance record.
    """
    if timestamp is None:
        timestamp = datetime.now(timezone.utc).isoformat()
    return {
        "tool_version": _version,
        "input_digest": digest,
        "generated_at": timestamp,
        "dimension": r.dimension,
        "n_vertices": r.n_vertices,
        "rank_rb": r.rank_rb,
        "rank_lb": r.rank_lb,
        "dim_null_rb": r.dim_null_rb,
        "dim_null_lb": r.dim_null_lb,
        "null_basis_rb": [[float(x) for x in row] for row in r.null_basis_rb],
        "null_basis_lb": [[float(x) for x in row] for row in r.null_basis_lb],
        "trivial_dim": r.trivial_dim,
        "is_ibr": r.is_ibr,
        "kernel_equal": r.kernel_equal,
        "is_bearing_equivalent": r.is_bearing_equivalent,
        "spectrum": [[float(z.real), float(z.imag)] for z in r.spectrum],
        "min_real_part": r.min_real_part,
        "zero_multiplicity_algebraic": r.zero_multiplicity_algebraic,
        "zero_multiplicity_geometric": r.zero_multiplicity_geometric,
        "defective_zero": r.defective_zero,
        "condition_flags": {
            "acyclic": r.condition_flags.acyclic,
            "spanning_root_exists": r.condition_flags.spanning_root_exists,
            "lff": r.condition_flags.lff,
            "prop_nonequiv_I": r.condition_flags.prop_nonequiv_I,
            "prop_nonequiv_II": r.condition_flags.prop_nonequiv_II,
            "prop_nonequiv_III": r.condition_flags.prop_nonequiv_III,
            "prop_two_edge_sufficient": r.condition_flags.prop_two_edge_sufficient,
            "thm2_condition_II_holds": r.condition_flags.thm2_condition_II_holds,
        },
        "tolerances": {
            "rank_rel": r.tolerances.rank_rel,
            "subspace": r.tolerances.subspace,
            "collinear": r.tolerances.collinear,
            "zero_eig_abs": r.tolerances.zero_eig_abs,
            "spectrum_rel": r.tolerances.spectrum_rel,
        },
    }


def serialize_report(
    r: EquivalenceReport,
    digest: str | None = None,
    timestamp: str | None = None,
) -> str:
    """Deterministic JSON report (sorted keys, repr-exact floats)."""
    return json.dumps(
        report_to_document(r, digest=digest, timestamp=timestamp),
        indent=2,
        sort_keys=True,
    )


def parse_report(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc


def export_trace(trace: SimulationTrace) -> str:
    """CSV with header t,p_1_1,...,p_n_d,bearing_error; one row per sample."""
    samples, n, d = trace.states.shape
    cols = ["t"] + [f"p_{i + 1}_{a + 1}" for i in range(n) for a in range(d)] + [
        "bearing_error"
    ]
    lines = [",".join(cols)]
    for s in range(samples):
        row = [repr(float(trace.times[s]))]
        row += [repr(float(x)) for x in trace.states[s].reshape(-1)]
        row.append(repr(float(trace.bearing_errors[s])))
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"
