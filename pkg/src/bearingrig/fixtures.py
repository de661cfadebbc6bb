"""Canonical small formations used across tests, demos, and docs.

All vertex ids are 1-based and the edge order shown is the canonical matrix
row order.
"""

from __future__ import annotations

import numpy as np

from .geometry import Configuration, DirectedFormation
from .graphs import validate_graph

#: Edge list of the four-agent cyclic counterexample formation, see
#: :func:`unstable_cyclic_quad`.  The orientation was pinned down by an
#: exhaustive search over all 5-edge digraphs on four labels: this is the
#: unique one whose bearing Laplacian at UNSTABLE_QUAD_POSITIONS has the
#: reference spectrum {0, 0, 0, 1.6400 +/- 0.7564i, 0.8879 +/- 0.3799i,
#: -0.0559} (max eigenvalue deviation 5.1e-5).
UNSTABLE_QUAD_EDGES = ((1, 4), (2, 1), (3, 2), (4, 2), (4, 3))

#: Positions at which the quad's bearing Laplacian has an eigenvalue with
#: negative real part (about -0.0559) even though the formation is bearing
#: equivalent: spectrum nonnegativity fails for cyclic digraphs.
UNSTABLE_QUAD_POSITIONS = (
    (5.8009, 0.1698),
    (1.2086, 8.6271),
    (4.8430, 8.4486),
    (2.0941, 5.5229),
)

#: Six-edge quad in which vertex 2 has three out-going edges; removing
#: vertex 2 leaves the directed triangle 1 -> 4 -> 3 -> 1.  At generic
#: positions it is bearing equivalent although the out-degree-2 sufficient
#: condition fails, showing that condition is not necessary.
DENSE_QUAD_EDGES = ((2, 1), (1, 4), (2, 4), (2, 3), (4, 3), (3, 1))


def pair() -> DirectedFormation:
    """Two agents, one edge: 1 observes 2 along the x-axis."""
    return DirectedFormation(
        validate_graph(2, [(1, 2)]),
        Configuration(np.array([[0.0, 0.0], [1.0, 0.0]])),
    )


def lff_triangle() -> DirectedFormation:
    """Right triangle with leader 1, first follower 2, and vertex 3
    observing both: the smallest leader-first-follower formation."""
    return DirectedFormation(
        validate_graph(3, [(2, 1), (3, 1), (3, 2)]),
        Configuration(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])),
    )


def cycle_triangle() -> DirectedFormation:
    """Directed 3-cycle on the same right triangle."""
    return DirectedFormation(
        validate_graph(3, [(1, 2), (2, 3), (3, 1)]),
        Configuration(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])),
    )


def path_triangle() -> DirectedFormation:
    """Acyclic chain 3 -> 2 -> 1 on the right triangle: two single-out-edge
    vertices, hence bearing non-equivalent with a 4-dimensional Laplacian
    null space."""
    return DirectedFormation(
        validate_graph(3, [(2, 1), (3, 2)]),
        Configuration(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])),
    )


def unstable_cyclic_quad() -> DirectedFormation:
    """Four-agent cyclic formation whose flow has one unstable mode.

    Bearing equivalent (trivial null space of dimension 3) yet with a
    negative-real-part eigenvalue about -0.0559, so the linear formation
    flow diverges from generic initial conditions.
    """
    return DirectedFormation(
        validate_graph(4, UNSTABLE_QUAD_EDGES),
        Configuration(np.array(UNSTABLE_QUAD_POSITIONS)),
    )


def dense_out_degree_quad(seed: int = 0) -> DirectedFormation:
    """The three-out-edge quad at seeded random positions in [0, 10]^2."""
    rng = np.random.default_rng(seed)
    return DirectedFormation(
        validate_graph(4, DENSE_QUAD_EDGES),
        Configuration(rng.uniform(0.0, 10.0, (4, 2))),
    )
