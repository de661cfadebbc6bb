"""Configurations, bearings, projection matrices, and formation construction.

The basic objects: a Configuration is n points in R^d (d >= 2), a
DirectedFormation is a directed graph together with a configuration.  The
bearing of an edge (i, j) is the unit vector g = (p_j - p_i)/||p_j - p_i||,
and the projection matrix of a nonzero vector x,

    P(x) = I - (x/||x||)(x/||x||)^T,

projects onto the orthogonal complement of x.  P(x) is symmetric, idempotent,
positive semi-definite, annihilates x, and satisfies P(x) = P(-x); two
nonzero vectors are parallel iff P(x) y = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import (
    CoincidentPointsError,
    CollinearOutEdgesError,
    DegenerateConfigurationError,
    DimensionNotLargerError,
    InvalidSpecError,
    NoOutEdgesError,
    TooFewTargetsError,
    ZeroVectorError,
)
from .graphs import DirectedGraph, validate_graph

#: Minimum inter-point distance on an edge for a bearing to be defined.
SEP_MIN = 1e-12

#: Default tolerance on ||P(x) y/||y|||| below which x and y count as parallel.
PARALLEL_TOL = 1e-9

#: Default side length of the sampling box used by the generator.
DEFAULT_BOX = 10.0


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Configuration:
    """n points in R^d, d >= 2, stored as an (n, d) array."""

    points: NDArray[np.float64]

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=np.float64))
        if pts.ndim != 2:
            raise ValueError("points must be an (n, d) array")
        if pts.shape[1] < 2:
            raise ValueError(f"ambient dimension must be >= 2, got {pts.shape[1]}")
        if not np.isfinite(pts).all():
            raise ValueError("points contain non-finite coordinates")
        object.__setattr__(self, "points", _freeze(pts))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @property
    def stacked(self) -> NDArray[np.float64]:
        """The dn-vector (p_1; p_2; ...; p_n)."""
        return self.points.reshape(-1)


@dataclass(frozen=True)
class DirectedFormation:
    """A directed graph drawn in R^d: graph.n points, one per vertex.

    Every edge must join points further apart than sep_min so that all
    bearings are defined.
    """

    graph: DirectedGraph
    config: Configuration
    sep_min: float = SEP_MIN

    def __post_init__(self):
        if self.graph.n != self.config.n:
            raise ValueError(
                f"graph has {self.graph.n} vertices but configuration has "
                f"{self.config.n} points"
            )
        pts = self.config.points
        for k, (i, j) in enumerate(self.graph.edges):
            if np.linalg.norm(pts[j - 1] - pts[i - 1]) <= self.sep_min:
                raise CoincidentPointsError(
                    f"edge {k + 1} = ({i}, {j}) joins coincident points",
                    edge_index=k,
                )

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def d(self) -> int:
        return self.config.d

    @property
    def m(self) -> int:
        return self.graph.m


def make_formation(n: int, edges, points, sep_min: float = SEP_MIN) -> DirectedFormation:
    """Convenience constructor from raw vertex count, edge list, and points."""
    return DirectedFormation(validate_graph(n, edges), Configuration(np.asarray(points)), sep_min)


def projection(x, sep_min: float = SEP_MIN) -> NDArray[np.float64]:
    """Orthogonal-complement projector I - uu^T with u = x/||x||."""
    x = np.asarray(x, dtype=np.float64)
    norm = np.linalg.norm(x)
    if norm <= sep_min:
        raise ZeroVectorError(f"cannot project along a vector of norm {norm:.3e}")
    u = x / norm
    return np.eye(x.size) - np.outer(u, u)


def bearing(p_i, p_j, sep_min: float = SEP_MIN) -> NDArray[np.float64]:
    """Unit vector pointing from p_i toward p_j."""
    e = np.asarray(p_j, dtype=np.float64) - np.asarray(p_i, dtype=np.float64)
    norm = np.linalg.norm(e)
    if norm <= sep_min:
        raise CoincidentPointsError("bearing undefined between coincident points")
    return e / norm


def edge_vectors(f: DirectedFormation) -> NDArray[np.float64]:
    """(m, d) array of p_j - p_i in canonical edge order."""
    pts = f.config.points
    return np.array([pts[j - 1] - pts[i - 1] for (i, j) in f.graph.edges]).reshape(f.m, f.d)


def edge_lengths(f: DirectedFormation) -> NDArray[np.float64]:
    return np.linalg.norm(edge_vectors(f), axis=1)


def bearings(f: DirectedFormation) -> NDArray[np.float64]:
    """(m, d) array of unit edge bearings in canonical edge order."""
    vecs = edge_vectors(f)
    norms = np.linalg.norm(vecs, axis=1)
    for k, nrm in enumerate(norms):
        if nrm <= f.sep_min:
            raise CoincidentPointsError(
                f"edge {k + 1} joins coincident points", edge_index=k
            )
    return vecs / norms[:, None]


def bearing_function(f: DirectedFormation) -> NDArray[np.float64]:
    """The stacked dm-vector of all edge bearings (g_1; ...; g_m)."""
    return bearings(f).reshape(-1)


def are_parallel(x, y, tol: float = PARALLEL_TOL) -> bool:
    """True iff x and y are parallel: ||P(x) y/||y|||| <= tol."""
    y = np.asarray(y, dtype=np.float64)
    norm_y = np.linalg.norm(y)
    if norm_y == 0.0:
        raise ZeroVectorError("parallelism undefined for a zero vector")
    residual = projection(x) @ (y / norm_y)
    return float(np.linalg.norm(residual)) <= tol


def out_bearings(f: DirectedFormation, v: int) -> NDArray[np.float64]:
    """Bearings of the edges leaving v, in edge order."""
    g = bearings(f)
    rows = [k for k, (i, _) in enumerate(f.graph.edges) if i == v]
    return g[rows]


def outgoing_collinear(f: DirectedFormation, v: int, tol: float = PARALLEL_TOL) -> bool:
    """True iff all bearings leaving v are pairwise parallel.

    A vertex with a single out-edge is trivially collinear and returns True;
    callers that care distinguish via out-degree.  Raises NoOutEdgesError for
    out-degree 0.
    """
    outs = out_bearings(f, v)
    if len(outs) == 0:
        raise NoOutEdgesError(f"vertex {v} has no out-going edges")
    first = outs[0]
    return all(are_parallel(first, g, tol) for g in outs[1:])


def trivial_motion_basis(
    c: Configuration, orthonormalize: bool = False
) -> NDArray[np.float64]:
    """dn x (d+1) matrix whose columns span the trivial motions.

    The first d columns are 1 kron I_d (rigid translations); the last column
    is the stacked configuration p itself (uniform scaling about the origin).
    With orthonormalize=True the columns are replaced by an orthonormal basis
    of their span.
    """
    pts = c.points
    if np.linalg.norm(pts - pts[0], axis=1).max(initial=0.0) <= SEP_MIN:
        raise DegenerateConfigurationError("all points coincide")
    n, d = c.n, c.d
    basis = np.zeros((n * d, d + 1))
    basis[:, :d] = np.tile(np.eye(d), (n, 1))
    basis[:, d] = c.stacked
    if orthonormalize:
        q, r = np.linalg.qr(basis)
        keep = np.abs(np.diag(r)) > 1e-12 * max(1.0, np.abs(np.diag(r)).max())
        return q[:, keep]
    return basis


def lift(f: DirectedFormation, d_new: int) -> DirectedFormation:
    """Embed the formation in a higher dimension by zero-padding positions."""
    if d_new <= f.d:
        raise DimensionNotLargerError(
            f"target dimension {d_new} must exceed current dimension {f.d}"
        )
    padded = np.zeros((f.n, d_new))
    padded[:, : f.d] = f.config.points
    return DirectedFormation(f.graph, Configuration(padded), f.sep_min)


def grow(
    f: DirectedFormation,
    p_new,
    targets,
    tol: float = PARALLEL_TOL,
) -> DirectedFormation:
    """Add vertex n+1 at p_new with out-edges to >= 2 existing targets.

    The new out-going bearings must not all be pairwise parallel (otherwise
    the added vertex would be free to slide along the common line).  Existing
    edges keep their order; the new edges are appended in target order.
    """
    targets = [int(t) for t in targets]
    if len(targets) < 2:
        raise TooFewTargetsError(f"need at least 2 targets, got {len(targets)}")
    p_new = np.asarray(p_new, dtype=np.float64)
    if p_new.shape != (f.d,):
        raise ValueError(f"new position must have dimension {f.d}")
    new_bearings = []
    for t in targets:
        if not (1 <= t <= f.n):
            raise ValueError(f"target {t} is not an existing vertex")
        new_bearings.append(bearing(p_new, f.config.points[t - 1], f.sep_min))
    head = new_bearings[0]
    if all(are_parallel(head, g, tol) for g in new_bearings[1:]):
        raise CollinearOutEdgesError(
            "all out-going edges of the new vertex are collinear"
        )
    new_id = f.n + 1
    edges = f.graph.edges + tuple((new_id, t) for t in targets)
    points = np.vstack([f.config.points, p_new])
    return DirectedFormation(
        validate_graph(new_id, edges), Configuration(points), f.sep_min
    )


@dataclass(frozen=True)
class GenSpec:
    """Parameters for deterministic random formation generation.

    kind:
      * "lff": leader-first-follower graph built by sequential vertex
        addition, each new vertex with >= 2 non-collinear out-edges;
      * "directed_cycle_with_chords": the n-cycle 1->2->...->n->1 plus, for
        n > 3, random chords between cycle-non-adjacent vertices;
      * "random_positions_on_graph": fresh positions on a supplied graph.
    """

    kind: str
    n: int
    d: int = 2
    seed: int = 0
    box: float = DEFAULT_BOX
    graph: DirectedGraph | None = None
    chord_probability: float = 0.25

    KINDS = ("lff", "directed_cycle_with_chords", "random_positions_on_graph")


def _sample_point(rng: np.random.Generator, d: int, box: float, existing, min_sep: float):
    for _ in range(1000):
        p = rng.uniform(0.0, box, d)
        if all(np.linalg.norm(p - q) > min_sep for q in existing):
            return p
    raise InvalidSpecError("could not sample a well-separated point")


def generate(spec: GenSpec) -> DirectedFormation:
    """Deterministic (seeded) random formation of the requested kind.

    Positions are sampled uniformly in [0, box]^d and resampled on
    near-coincidence; for the lff kind a position is also resampled until
    the vertex's out-going bearings are not all pairwise parallel.
    """
    if spec.kind not in GenSpec.KINDS:
        raise InvalidSpecError(f"unknown kind {spec.kind!r}; expected one of {GenSpec.KINDS}")
    if spec.d < 2:
        raise InvalidSpecError(f"ambient dimension must be >= 2, got {spec.d}")
    if spec.box <= 0:
        raise InvalidSpecError("box must be positive")
    rng = np.random.default_rng(spec.seed)
    min_sep = 1e-6 * spec.box

    if spec.kind == "random_positions_on_graph":
        if spec.graph is None:
            raise InvalidSpecError("random_positions_on_graph requires a graph")
        g = spec.graph
        points: list[np.ndarray] = []
        for _ in range(g.n):
            points.append(_sample_point(rng, spec.d, spec.box, points, min_sep))
        return DirectedFormation(g, Configuration(np.array(points)))

    if spec.n < 2:
        raise InvalidSpecError(f"need n >= 2, got {spec.n}")

    if spec.kind == "directed_cycle_with_chords":
        edges = [(i, i % spec.n + 1) for i in range(1, spec.n + 1)]
        cycle_pairs = {frozenset(e) for e in edges}
        for i in range(1, spec.n + 1):
            for j in range(1, spec.n + 1):
                if i != j and frozenset((i, j)) not in cycle_pairs:
                    if rng.random() < spec.chord_probability and (i, j) not in edges:
                        edges.append((i, j))
        points = []
        for _ in range(spec.n):
            points.append(_sample_point(rng, spec.d, spec.box, points, min_sep))
        return DirectedFormation(validate_graph(spec.n, edges), Configuration(np.array(points)))

    # kind == "lff": sequential construction
    points = [rng.uniform(0.0, spec.box, spec.d)]
    edges = []
    if spec.n >= 2:
        points.append(_sample_point(rng, spec.d, spec.box, points, min_sep))
        edges.append((2, 1))
    for v in range(3, spec.n + 1):
        n_targets = int(rng.integers(2, v))  # between 2 and v-1 targets
        targets = sorted(rng.choice(v - 1, size=n_targets, replace=False) + 1)
        for _ in range(1000):
            p = _sample_point(rng, spec.d, spec.box, points, min_sep)
            bs = [bearing(p, points[t - 1]) for t in targets]
            if not all(are_parallel(bs[0], b) for b in bs[1:]):
                break
        else:
            raise InvalidSpecError("could not place a non-collinear vertex")
        points.append(p)
        edges.extend((v, t) for t in targets)
    return DirectedFormation(validate_graph(spec.n, edges), Configuration(np.array(points)))
