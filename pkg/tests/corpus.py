"""Seeded random formation corpora for the property and acceptance suites.

Positions are sampled pairwise-separated so edge lengths stay in a generic
range, and every sampled formation is re-drawn while the rank decisions of
its rigidity matrix or Laplacian sit within a factor of 10 of the cutoff
(ambiguous-rank guard): the structural propositions under test assume
generic positions.
"""

from __future__ import annotations

import numpy as np

from bearingrig import (
    DirectedFormation,
    GenSpec,
    generate,
    validate_graph,
)
from bearingrig.analysis import RANK_TOL
from bearingrig.geometry import Configuration
from bearingrig.operators import bearing_laplacian_blocks, bearing_rigidity_matrix

BOX = 10.0
MIN_SEP = 0.5


def separated_positions(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    pts: list[np.ndarray] = []
    while len(pts) < n:
        cand = rng.uniform(0.0, BOX, d)
        if all(np.linalg.norm(cand - q) > MIN_SEP for q in pts):
            pts.append(cand)
    return np.array(pts)


def rank_is_crisp(M: np.ndarray, tol_rel: float = RANK_TOL, margin: float = 10.0) -> bool:
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return True
    cutoff = tol_rel * s[0]
    return not bool(np.any((s > cutoff / margin) & (s <= cutoff * margin)))


def is_generic(f: DirectedFormation) -> bool:
    return rank_is_crisp(bearing_rigidity_matrix(f)) and rank_is_crisp(
        bearing_laplacian_blocks(f)
    )


def _with_positions(rng, n, d, edges) -> DirectedFormation:
    graph = validate_graph(n, edges)
    for _ in range(50):
        f = DirectedFormation(graph, Configuration(separated_positions(rng, n, d)))
        if is_generic(f):
            return f
    raise RuntimeError("could not draw a generic configuration")


def random_dag(rng: np.random.Generator, n: int, d: int, edge_prob: float = 0.5) -> DirectedFormation:
    """Random acyclic formation: edges point from later to earlier in a
    shuffled vertex order."""
    order = rng.permutation(n) + 1
    edges = []
    for a in range(1, n):
        for b in range(a):
            if rng.random() < edge_prob:
                edges.append((int(order[a]), int(order[b])))
    if not edges:
        edges.append((int(order[1]), int(order[0])))
    return _with_positions(rng, n, d, edges)


def random_digraph(rng: np.random.Generator, n: int, d: int, edge_prob: float = 0.35) -> DirectedFormation:
    """Random directed formation; cycles allowed."""
    edges = [
        (i, j)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        if i != j and rng.random() < edge_prob
    ]
    if not edges:
        edges = [(1, 2)]
    return _with_positions(rng, n, d, edges)


def random_lff(rng: np.random.Generator, n: int, d: int) -> DirectedFormation:
    return generate(GenSpec(kind="lff", n=n, d=d, seed=int(rng.integers(0, 2**31))))


def random_cycle_chords(rng: np.random.Generator, n: int, d: int) -> DirectedFormation:
    return generate(
        GenSpec(kind="directed_cycle_with_chords", n=n, d=d, seed=int(rng.integers(0, 2**31)))
    )


def mixed_corpus(seed: int, count: int, n_range=(3, 8), dims=(2, 3)) -> list[DirectedFormation]:
    """Deterministic mixed bag of acyclic and cyclic formations.

    Besides the ambiguous-rank guard, members keep all edge lengths at or
    above MIN_SEP so finite-difference checks stay well conditioned.
    """
    rng = np.random.default_rng(seed)
    makers = [random_dag, random_digraph, random_lff, random_cycle_chords]
    out = []
    while len(out) < count:
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        d = int(rng.choice(dims))
        maker = makers[len(out) % len(makers)]
        f = maker(rng, n, d)
        if is_generic(f) and float(edge_lengths(f).min()) >= MIN_SEP:
            out.append(f)
    return out


def acyclic_corpus(seed: int, count: int, n_max: int = 10, dims=(2, 3)) -> list[DirectedFormation]:
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n = int(rng.integers(2, n_max + 1))
        d = int(rng.choice(dims))
        out.append(random_dag(rng, n, d))
    return out


def two_leader_formation(rng: np.random.Generator, n: int, d: int) -> DirectedFormation:
    """Vertices 1 and 2 have no out-edges; everyone else points only at
    earlier vertices, at least one edge each."""
    assert n >= 3
    edges = []
    for v in range(3, n + 1):
        targets = rng.choice(v - 1, size=int(rng.integers(1, v - 1 + 1)), replace=False) + 1
        edges.extend((v, int(t)) for t in sorted(targets))
    return _with_positions(rng, n, d, edges)


def two_single_out_formation(rng: np.random.Generator, n: int, d: int) -> DirectedFormation:
    """Acyclic, with vertices 2 and 3 having exactly one out-edge each."""
    assert n >= 3
    edges = [(2, 1), (3, int(rng.integers(1, 3)))]
    for v in range(4, n + 1):
        n_t = int(rng.integers(2, v))
        targets = rng.choice(v - 1, size=n_t, replace=False) + 1
        edges.extend((v, int(t)) for t in sorted(targets))
    return _with_positions(rng, n, d, edges)


def two_collinear_formation(rng: np.random.Generator, n: int, d: int) -> DirectedFormation:
    """Acyclic, with the last two vertices each having two out-going edges
    whose bearings are exactly parallel (vertex placed on the line through
    its two targets)."""
    assert n >= 4
    base = n - 2
    edges = [(v, int(t)) for v in range(2, base + 1) for t in rng.choice(v - 1, size=1) + 1]
    pts = separated_positions(rng, base, d)
    rows = [pts]
    for v in (base + 1, base + 2):
        a, b = rng.choice(base, size=2, replace=False) + 1
        t = float(rng.uniform(1.5, 2.5))
        pos = pts[a - 1] + t * (pts[b - 1] - pts[a - 1])
        rows.append(pos[None, :])
        edges.extend([(v, int(a)), (v, int(b))])
    graph = validate_graph(n, edges)
    return DirectedFormation(graph, Configuration(np.vstack(rows)))
