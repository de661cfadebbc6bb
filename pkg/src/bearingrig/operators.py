"""The matrices attached to a directed bearing formation.

For a formation with incidence matrix H, observer selector J, edge bearings
g_k and edge lengths l_k (bar denoting the Kronecker product with I_d):

    rigidity matrix        R  = diag(P(g_k)/l_k) Hbar        (dm x dn)
    scaled rigidity        Rs = diag(P(g_k)) Hbar             (dm x dn)
    left factor            Ls = Jbar^T diag(P(g_k))           (dn x dm)
    bearing Laplacian      L  = Jbar^T diag(P(g_k)) Hbar = Ls Rs   (dn x dn)

R is the Jacobian of the stacked bearing function.  L is the matrix-weighted
directed Laplacian whose block row i sums the projections of vertex i's
out-going bearings on the diagonal and carries -P(g_ij) at block (i, j); rows
of vertices without out-edges are zero.  For an undirected reading of the
edge set, Hbar^T diag(P(g_k)) Hbar is the symmetric positive semi-definite
counterpart with the same null space as R.

All constructions are dense: the intended scale is desk-size formations, and
auditability beats sparsity there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import ConsistencyError, NonUnitDesiredBearingError
from .geometry import DirectedFormation, bearings, edge_lengths, projection
from .graphs import incidence_matrix, observer_selector_matrix

#: Entrywise agreement required between the block and factored Laplacians.
CROSS_FORM_TOL = 1e-12


def _kron_eye(M: np.ndarray, d: int) -> np.ndarray:
    return np.kron(M, np.eye(d))


def _projection_blocks(unit_bearings: np.ndarray) -> np.ndarray:
    """Block-diagonal dm x dm matrix of projectors, one per edge."""
    m, d = unit_bearings.shape
    blocks = np.zeros((m * d, m * d))
    for k in range(m):
        g = unit_bearings[k]
        blocks[k * d : (k + 1) * d, k * d : (k + 1) * d] = np.eye(d) - np.outer(g, g)
    return blocks


def _resolve_bearings(f: DirectedFormation, desired) -> NDArray[np.float64]:
    if desired is None:
        return bearings(f)
    desired = np.asarray(desired, dtype=np.float64)
    if desired.shape != (f.m, f.d):
        raise ValueError(
            f"desired bearings must have shape ({f.m}, {f.d}), got {desired.shape}"
        )
    norms = np.linalg.norm(desired, axis=1)
    bad = np.abs(norms - 1.0) > 1e-9
    if bad.any():
        k = int(np.argmax(bad))
        raise NonUnitDesiredBearingError(
            f"desired bearing {k + 1} has norm {norms[k]:.12f}, expected 1"
        )
    return desired


def bearing_rigidity_matrix(f: DirectedFormation) -> NDArray[np.float64]:
    """dm x dn Jacobian of the stacked bearing function.

    Block row k of edge (i, j) is P(g_k)/l_k applied to [... -I_d ... +I_d ...].
    Its null space always contains the trivial motions (translations and the
    configuration itself).
    """
    lens = edge_lengths(f)
    scale = np.repeat(1.0 / lens, f.d)
    return scale[:, None] * (_projection_blocks(bearings(f)) @ _kron_eye(incidence_matrix(f.graph), f.d))


def bearing_laplacian_blocks(
    f: DirectedFormation, desired_bearings=None
) -> NDArray[np.float64]:
    """dn x dn bearing Laplacian assembled block by block.

    Block (i, i) sums the projectors of vertex i's out-going bearings; block
    (i, j) is -P(g_ij) for each edge (i, j); everything else is zero.  By
    default the formation's own bearings weight the blocks; passing
    desired_bearings (one unit vector per edge, canonical edge order) builds
    the Laplacian of a target bearing set instead, which is what the
    formation flow integrates.
    """
    g = _resolve_bearings(f, desired_bearings)
    d, n = f.d, f.n
    L = np.zeros((d * n, d * n))
    for k, (i, j) in enumerate(f.graph.edges):
        P = np.eye(d) - np.outer(g[k], g[k])
        L[d * (i - 1) : d * i, d * (i - 1) : d * i] += P
        L[d * (i - 1) : d * i, d * (j - 1) : d * j] -= P
    return L


def bearing_laplacian_factored(f: DirectedFormation) -> NDArray[np.float64]:
    """The same Laplacian via Jbar^T diag(P(g_k)) Hbar.

    The factored product must agree entrywise with the block assembly; the
    check is mandatory because the two formulas fail to agree under any
    inconsistent incidence-orientation convention, which is the easiest
    mistake to make in this construction.
    """
    blocks = bearing_laplacian_blocks(f)
    Jbar = _kron_eye(observer_selector_matrix(f.graph), f.d)
    Hbar = _kron_eye(incidence_matrix(f.graph), f.d)
    factored = Jbar.T @ _projection_blocks(bearings(f)) @ Hbar
    gap = float(np.abs(factored - blocks).max())
    if gap > CROSS_FORM_TOL:
        raise ConsistencyError(
            f"factored and block Laplacians disagree by {gap:.3e}"
        )
    return factored


def scaled_factors(
    f: DirectedFormation,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """(left factor, scaled rigidity) whose product is the bearing Laplacian.

    The scaled rigidity diag(P(g_k)) Hbar equals diag(l_k) R and therefore
    shares R's null space; the left factor is Jbar^T diag(P(g_k)).
    """
    blocks = _projection_blocks(bearings(f))
    Hbar = _kron_eye(incidence_matrix(f.graph), f.d)
    Jbar = _kron_eye(observer_selector_matrix(f.graph), f.d)
    return Jbar.T @ blocks.T, blocks @ Hbar


def undirected_bearing_laplacian(f: DirectedFormation) -> NDArray[np.float64]:
    """Hbar^T diag(P(g_k)) Hbar: the edge set read as undirected.

    Symmetric positive semi-definite, with the same null space as the
    rigidity matrix.
    """
    blocks = _projection_blocks(bearings(f))
    Hbar = _kron_eye(incidence_matrix(f.graph), f.d)
    return Hbar.T @ blocks @ Hbar


@dataclass(frozen=True)
class OperatorBundle:
    """Every derived matrix of one formation, built consistently.

    Fields: incidence (m x n), observer selector (m x n), their Kronecker
    expansions (dm x dn), rigidity matrix, scaled rigidity, left factor
    (dn x dm), bearing Laplacian, and per-edge lengths.
    """

    incidence: NDArray[np.float64]
    observer_selector: NDArray[np.float64]
    incidence_kron: NDArray[np.float64]
    observer_kron: NDArray[np.float64]
    rigidity: NDArray[np.float64]
    scaled_rigidity: NDArray[np.float64]
    left_factor_t: NDArray[np.float64]
    laplacian: NDArray[np.float64]
    edge_lengths: NDArray[np.float64]


def operator_bundle(f: DirectedFormation) -> OperatorBundle:
    """Build all operators once, with the cross-form consistency check."""
    H = incidence_matrix(f.graph)
    J = observer_selector_matrix(f.graph)
    Hbar = _kron_eye(H, f.d)
    Jbar = _kron_eye(J, f.d)
    blocks = _projection_blocks(bearings(f))
    lens = edge_lengths(f)
    scaled_rigidity = blocks @ Hbar
    rigidity = scaled_rigidity / np.repeat(lens, f.d)[:, None]
    left_factor_t = Jbar.T @ blocks.T
    laplacian = bearing_laplacian_blocks(f)
    gap = float(np.abs(left_factor_t @ scaled_rigidity - laplacian).max())
    if gap > CROSS_FORM_TOL:
        raise ConsistencyError(f"factored and block Laplacians disagree by {gap:.3e}")
    return OperatorBundle(
        incidence=H,
        observer_selector=J,
        incidence_kron=Hbar,
        observer_kron=Jbar,
        rigidity=rigidity,
        scaled_rigidity=scaled_rigidity,
        left_factor_t=left_factor_t,
        laplacian=laplacian,
        edge_lengths=lens,
    )
