"""Independent reference computations the tests check the package against.

Everything here deliberately avoids the production code paths: exact
rational elimination for ranks, finite differences for the Jacobian, a
Taylor-series matrix exponential for the linear flow, and the
block-triangular decomposition for acyclic spectra.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from bearingrig import DirectedFormation, bearing_function
from bearingrig.geometry import Configuration


def exact_rank(rows) -> int:
    """Rank over the rationals by Gaussian elimination with exact pivots."""
    rows = [[Fraction(x) for x in row] for row in rows]
    if not rows:
        return 0
    n_cols = len(rows[0])
    rank = 0
    for col in range(n_cols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                factor = rows[i][col] / pv
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def exact_projection(edge_vector) -> list[list[Fraction]]:
    """P(x) = I - xx^T/(x.x) over the rationals; equals P of the unit bearing."""
    v = [Fraction(x) for x in edge_vector]
    dot = sum(a * a for a in v)
    d = len(v)
    return [
        [Fraction(int(i == j)) - v[i] * v[j] / dot for j in range(d)]
        for i in range(d)
    ]


def exact_scaled_rigidity(n, d, edges, points) -> list[list[Fraction]]:
    """diag(P(e_k)) (H kron I_d) over the rationals: same rank and null space
    as the rigidity matrix whenever all coordinates are rational."""
    pts = [[Fraction(x) for x in p] for p in points]
    m = len(edges)
    rows = [[Fraction(0)] * (d * n) for _ in range(d * m)]
    for k, (i, j) in enumerate(edges):
        e = [pts[j - 1][a] - pts[i - 1][a] for a in range(d)]
        P = exact_projection(e)
        for r in range(d):
            for c in range(d):
                rows[d * k + r][d * (i - 1) + c] -= P[r][c]
                rows[d * k + r][d * (j - 1) + c] += P[r][c]
    return rows


def exact_bearing_laplacian(n, d, edges, points) -> list[list[Fraction]]:
    """Block form of the bearing Laplacian over the rationals."""
    pts = [[Fraction(x) for x in p] for p in points]
    L = [[Fraction(0)] * (d * n) for _ in range(d * n)]
    for (i, j) in edges:
        e = [pts[j - 1][a] - pts[i - 1][a] for a in range(d)]
        P = exact_projection(e)
        for r in range(d):
            for c in range(d):
                L[d * (i - 1) + r][d * (i - 1) + c] += P[r][c]
                L[d * (i - 1) + r][d * (j - 1) + c] -= P[r][c]
    return L


def finite_difference_jacobian(f: DirectedFormation, step: float = 1e-5) -> np.ndarray:
    """Central finite differences of the stacked bearing function."""
    base = f.config.points
    dn = f.n * f.d
    dm = f.m * f.d
    jac = np.zeros((dm, dn))
    for r in range(dn):
        delta = np.zeros(dn)
        delta[r] = step
        plus = DirectedFormation(f.graph, Configuration(base + delta.reshape(f.n, f.d)))
        minus = DirectedFormation(f.graph, Configuration(base - delta.reshape(f.n, f.d)))
        jac[:, r] = (bearing_function(plus) - bearing_function(minus)) / (2 * step)
    return jac


def expm_series(A: np.ndarray) -> np.ndarray:
    """exp(A) by scaling-and-squaring over a plain Taylor series."""
    A = np.asarray(A, dtype=np.float64)
    norm = float(np.abs(A).sum(axis=1).max())
    squarings = max(0, int(np.ceil(np.log2(norm))) + 1) if norm > 0 else 0
    B = A / (2.0**squarings)
    X = np.eye(A.shape[0])
    term = np.eye(A.shape[0])
    for k in range(1, 80):
        term = term @ B / k
        X = X + term
        if float(np.abs(term).max()) < 1e-18:
            break
    for _ in range(squarings):
        X = X @ X
    return X


def acyclic_block_spectrum(f: DirectedFormation) -> np.ndarray:
    """Union of the diagonal-block eigenvalues of the bearing Laplacian in a
    topological vertex order: for acyclic graphs the Laplacian is block
    triangular in that order, so this is its full spectrum."""
    d = f.d
    vals = []
    for v in range(1, f.n + 1):
        block = np.zeros((d, d))
        for k, (i, j) in enumerate(f.graph.edges):
            if i == v:
                e = f.config.points[j - 1] - f.config.points[i - 1]
                u = e / np.linalg.norm(e)
                block += np.eye(d) - np.outer(u, u)
        vals.extend(np.linalg.eigvals(block))
    vals = np.array(vals)
    order = np.lexsort((vals.imag, vals.real))
    return vals[order]
