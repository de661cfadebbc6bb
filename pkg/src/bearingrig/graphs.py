"""Directed graphs, incidence-type matrices, and topological predicates.

Vertices are numbered 1..n.  The edge list order is canonical: matrix row k
corresponds to the k-th edge, and every derived operator in the package
indexes edges the same way.  An edge (i, j) means vertex i observes vertex j.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import (
    DuplicateEdgeError,
    SelfLoopError,
    TooFewVerticesError,
    VertexIdOutOfRangeError,
)


@dataclass(frozen=True)
class DirectedGraph:
    """A simple directed graph on vertices 1..n with ordered edges.

    Invariants (enforced on construction): no self-loops, no duplicate
    directed edges, all endpoints in 1..n, and n >= 2.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 2:
            raise TooFewVerticesError(f"need at least 2 vertices, got {self.n}")
        seen = set()
        for k, (i, j) in enumerate(self.edges):
            if i == j:
                raise SelfLoopError(f"edge {k + 1} is a self-loop at vertex {i}")
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise VertexIdOutOfRangeError(
                    f"edge {k + 1} = ({i}, {j}) leaves the vertex range 1..{self.n}"
                )
            if (i, j) in seen:
                raise DuplicateEdgeError(f"duplicate directed edge ({i}, {j})")
            seen.add((i, j))

    @property
    def m(self) -> int:
        return len(self.edges)

    def out_edges(self, v: int) -> list[tuple[int, tuple[int, int]]]:
        """Edges leaving v as (edge_index, (v, target)) pairs."""
        return [(k, e) for k, e in enumerate(self.edges) if e[0] == v]

    def targets(self, v: int) -> list[int]:
        """Vertices observed by v, in edge order."""
        return [j for (i, j) in self.edges if i == v]


def validate_graph(n: int, edges) -> DirectedGraph:
    """Build a validated graph from a vertex count and an edge list."""
    return DirectedGraph(int(n), tuple((int(i), int(j)) for i, j in edges))


def incidence_matrix(g: DirectedGraph) -> NDArray[np.float64]:
    """m x n incidence matrix H with -1 at the observer and +1 at the target.

    The orientation is fixed by requiring that the stacked edge-vector
    identity e = (H kron I_d) p holds with e_k = p_j - p_i for edge (i, j).
    """
    H = np.zeros((g.m, g.n))
    for k, (i, j) in enumerate(g.edges):
        H[k, i - 1] = -1.0
        H[k, j - 1] = 1.0
    return H


def observer_selector_matrix(g: DirectedGraph) -> NDArray[np.float64]:
    """m x n matrix J with a single -1 per row at the observer column.

    Equals the incidence matrix with its +1 entries zeroed, so that J^T H is
    the directed graph Laplacian (diagonal = out-degree, entry (i, j) = -1
    iff (i, j) is an edge).  A vertex with no out-edges yields an all-zero
    column.
    """
    J = np.zeros((g.m, g.n))
    for k, (i, _) in enumerate(g.edges):
        J[k, i - 1] = -1.0
    return J


def out_degree_profile(g: DirectedGraph) -> list[int]:
    """Out-degree of each vertex, in vertex-id order."""
    deg = [0] * g.n
    for (i, _) in g.edges:
        deg[i - 1] += 1
    return deg


def is_acyclic(g: DirectedGraph) -> bool:
    """True iff the graph has no directed cycle (Kahn's algorithm)."""
    indeg = [0] * (g.n + 1)
    adj: list[list[int]] = [[] for _ in range(g.n + 1)]
    for (i, j) in g.edges:
        adj[i].append(j)
        indeg[j] += 1
    queue = deque(v for v in range(1, g.n + 1) if indeg[v] == 0)
    removed = 0
    while queue:
        v = queue.popleft()
        removed += 1
        for w in adj[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return removed == g.n


def topological_order(g: DirectedGraph) -> list[int]:
    """A vertex order in which every edge points from later to earlier.

    Ordering the blocks of the bearing Laplacian this way makes it block
    lower triangular for acyclic graphs.  Raises ValueError on cyclic input.
    """
    indeg = [0] * (g.n + 1)
    adj: list[list[int]] = [[] for _ in range(g.n + 1)]
    for (i, j) in g.edges:
        adj[i].append(j)
        indeg[j] += 1
    queue = deque(v for v in range(1, g.n + 1) if indeg[v] == 0)
    order = []
    while queue:
        v = queue.popleft()
        order.append(v)
        for w in adj[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    if len(order) != g.n:
        raise ValueError("graph contains a directed cycle")
    return order


def spanning_root(g: DirectedGraph) -> int | None:
    """Some vertex reachable from every other vertex along edges, or None.

    Reachability follows edge direction (i, j): observations flow from i
    toward j, so the root is the vertex every agent can trace its sensing
    chain to.  Existence of such a vertex is the directed-spanning-tree
    condition; the smallest qualifying id is returned for determinism.
    """
    reverse: list[list[int]] = [[] for _ in range(g.n + 1)]
    for (i, j) in g.edges:
        reverse[j].append(i)
    for r in range(1, g.n + 1):
        seen = {r}
        queue = deque([r])
        while queue:
            v = queue.popleft()
            for w in reverse[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        if len(seen) == g.n:
            return r
    return None


@dataclass(frozen=True)
class LffStructure:
    """Structural leader-first-follower check result.

    is_structural_lff is the purely topological part: one vertex with no
    out-edges (leader), exactly one vertex with a single out-edge and that
    edge targets the leader (first follower), all remaining vertices with
    out-degree >= 2.  The geometric non-collinearity half of the definition
    is a property of positions and lives in the geometry module.
    """

    is_structural_lff: bool
    leader: int | None
    first_follower: int | None


def lff_structure(g: DirectedGraph) -> LffStructure:
    deg = out_degree_profile(g)
    leaders = [v + 1 for v, d in enumerate(deg) if d == 0]
    singles = [v + 1 for v, d in enumerate(deg) if d == 1]
    if len(leaders) != 1:
        return LffStructure(False, leaders[0] if len(leaders) == 1 else None, None)
    leader = leaders[0]
    if len(singles) != 1:
        return LffStructure(False, leader, None)
    follower = singles[0]
    if g.targets(follower) != [leader]:
        return LffStructure(False, leader, None)
    others_ok = all(
        d >= 2 for v, d in enumerate(deg) if v + 1 not in (leader, follower)
    )
    if not others_ok:
        return LffStructure(False, leader, follower)
    return LffStructure(True, leader, follower)
