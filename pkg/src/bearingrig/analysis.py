"""Numerical rank, null spaces, spectra, and the equivalence classifier.

A directed formation is *infinitesimally bearing rigid* (IBR) when the rank
of its rigidity matrix is dn - d - 1, equivalently when the only motions
preserving all bearings are rigid translations and uniform scaling.  It is
*bearing equivalent* when additionally the bearing Laplacian's null space
collapses to that same (d+1)-dimensional trivial space:

    Null(R) = Null(L) = span{1 kron I_d, p}.

This is the property that makes the linear formation flow converge to the
target shape.  Equivalence can also be decided through the factored form
L = Ls Rs: it holds iff the formation is IBR and Null(Ls) intersects
Range(Rs) trivially.  The classifier computes both routes and insists they
agree.

Everything here is tolerance-based linear algebra (LAPACK SVD and a general
eigensolver with balancing); the tolerances used are echoed into every
report so a classification is reproducible from the report alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .errors import (
    ConsistencyError,
    ConvergenceFailureError,
    DimensionMismatchError,
    NonFiniteEntriesError,
    NotAcyclicError,
    NotOrthonormalError,
)
from .geometry import (
    DirectedFormation,
    PARALLEL_TOL,
    out_bearings,
    outgoing_collinear,
    trivial_motion_basis,
)
from .graphs import lff_structure, is_acyclic, out_degree_profile, spanning_root
from .operators import bearing_laplacian_blocks, bearing_rigidity_matrix, scaled_factors

#: Relative singular-value cutoff for rank decisions.
RANK_TOL = 1e-10

#: Spectral-norm threshold on the projector difference for subspace equality.
SUBSPACE_TOL = 1e-8

#: Absolute threshold under which an eigenvalue counts as zero.
ZERO_EIG_TOL = 1e-6

#: Relative threshold for "real" / "nonnegative real part" spectrum tests.
SPECTRUM_REL_TOL = 1e-8

#: Largest matrix side the eigensolver will accept.
EIG_SIZE_CAP = 400


def _check_finite(M: np.ndarray) -> np.ndarray:
    M = np.asarray(M, dtype=np.float64)
    if not np.isfinite(M).all():
        raise NonFiniteEntriesError("matrix contains NaN or infinite entries")
    return M


def numerical_rank(M, tol_rel: float = RANK_TOL) -> int:
    """Count of singular values above tol_rel times the largest one."""
    M = _check_finite(M)
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int((s > tol_rel * s[0]).sum())


def null_space_basis(M, tol_rel: float = RANK_TOL) -> NDArray[np.float64]:
    """Orthonormal basis (columns) of the right null space of M."""
    M = _check_finite(M)
    _, s, vh = np.linalg.svd(M)
    if s.size == 0 or s[0] == 0.0:
        rank = 0
    else:
        rank = int((s > tol_rel * s[0]).sum())
    return vh[rank:].T.copy()


def range_basis(M, tol_rel: float = RANK_TOL) -> NDArray[np.float64]:
    """Orthonormal basis (columns) of the column space of M."""
    M = _check_finite(M)
    u, s, _ = np.linalg.svd(M)
    if s.size == 0 or s[0] == 0.0:
        rank = 0
    else:
        rank = int((s > tol_rel * s[0]).sum())
    return u[:, :rank].copy()


def _require_orthonormal(U: np.ndarray, name: str) -> np.ndarray:
    U = _check_finite(U)
    if U.ndim != 2:
        raise NotOrthonormalError(f"{name} must be a 2-d array of columns")
    if U.shape[1] == 0:
        return U
    gram_gap = float(np.abs(U.T @ U - np.eye(U.shape[1])).max())
    if gram_gap > 1e-8:
        raise NotOrthonormalError(
            f"{name} columns are not orthonormal (Gram deviation {gram_gap:.3e})"
        )
    return U


def subspace_equal(U, V, tol: float = SUBSPACE_TOL) -> bool:
    """True iff the column spans coincide.

    Compares the orthogonal projectors UU^T and VV^T in spectral norm, which
    is basis independent; different column counts can never span the same
    space and return False immediately.
    """
    U = _require_orthonormal(np.asarray(U, dtype=np.float64), "U")
    V = _require_orthonormal(np.asarray(V, dtype=np.float64), "V")
    if U.shape[0] != V.shape[0]:
        raise DimensionMismatchError("subspaces live in different ambient spaces")
    if U.shape[1] != V.shape[1]:
        return False
    if U.shape[1] == 0:
        return True
    gap = np.linalg.norm(U @ U.T - V @ V.T, 2)
    return float(gap) <= tol


def eigenvalues(M, size_cap: int = EIG_SIZE_CAP) -> NDArray[np.complex128]:
    """All eigenvalues of a real square matrix, sorted by (real, imag)."""
    M = _check_finite(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if M.shape[0] > size_cap:
        raise ValueError(f"matrix side {M.shape[0]} exceeds the cap {size_cap}")
    try:
        vals = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailureError(f"eigensolver failed: {exc}") from exc
    order = np.lexsort((vals.imag, vals.real))
    return vals[order]


def kernel_range_intersection_dim(A, B, tol_rel: float = RANK_TOL) -> int:
    """dim( Null(A) intersect Range(B) ) for compatible matrices.

    Computed as dim N + dim R - rank([N | R]) with orthonormal bases N of
    Null(A) and R of Range(B); the product AB has null space equal to
    Null(B) exactly when this dimension is zero.
    """
    A = _check_finite(A)
    B = _check_finite(B)
    if A.shape[1] != B.shape[0]:
        raise DimensionMismatchError(
            f"A has {A.shape[1]} columns but B has {B.shape[0]} rows"
        )
    N = null_space_basis(A, tol_rel)
    R = range_basis(B, tol_rel)
    if N.shape[1] == 0 or R.shape[1] == 0:
        return 0
    stacked = np.hstack([N, R])
    return N.shape[1] + R.shape[1] - numerical_rank(stacked, tol_rel)


def is_infinitesimally_bearing_rigid(
    f: DirectedFormation, tol_rel: float = RANK_TOL
) -> bool:
    """rank(R) == dn - d - 1: bearings pin the shape up to translation+scale."""
    R = bearing_rigidity_matrix(f)
    return numerical_rank(R, tol_rel) == f.d * f.n - f.d - 1


@dataclass(frozen=True)
class Tolerances:
    """Every threshold a classification depends on."""

    rank_rel: float = RANK_TOL
    subspace: float = SUBSPACE_TOL
    collinear: float = PARALLEL_TOL
    zero_eig_abs: float = ZERO_EIG_TOL
    spectrum_rel: float = SPECTRUM_REL_TOL


@dataclass(frozen=True)
class ConditionFlags:
    """Structural and spectral conditions evaluated alongside classification.

    The prop_nonequiv_* flags are the acyclic non-equivalence screens (two
    leaders / two single-out-edge vertices / two collinear-out-edge
    vertices); they are False for cyclic graphs, where they do not apply.
    """

    acyclic: bool
    spanning_root_exists: bool
    lff: bool
    prop_nonequiv_I: bool
    prop_nonequiv_II: bool
    prop_nonequiv_III: bool
    prop_two_edge_sufficient: bool
    thm2_condition_II_holds: bool


@dataclass(frozen=True)
class EquivalenceReport:
    """Ranks, null-space bases, spectrum, and classification of one formation."""

    dimension: int
    n_vertices: int
    rank_rb: int
    rank_lb: int
    dim_null_rb: int
    dim_null_lb: int
    null_basis_rb: NDArray[np.float64]
    null_basis_lb: NDArray[np.float64]
    trivial_dim: int
    is_ibr: bool
    kernel_equal: bool
    is_bearing_equivalent: bool
    spectrum: NDArray[np.complex128]
    min_real_part: float
    zero_multiplicity_algebraic: int
    zero_multiplicity_geometric: int
    defective_zero: bool
    condition_flags: ConditionFlags
    tolerances: Tolerances = field(default_factory=Tolerances)


@dataclass(frozen=True)
class SpectralFlags:
    """Coarse spectrum classification of a bearing Laplacian."""

    all_real_nonneg: bool
    has_negative_real_part: bool
    defective_zero: bool


def _zero_multiplicities(
    spectrum: np.ndarray, dim_null: int, zero_abs: float
) -> tuple[int, int, bool]:
    algebraic = int((np.abs(spectrum) <= zero_abs).sum())
    return algebraic, dim_null, algebraic != dim_null


def spectrum_classification(
    f: DirectedFormation,
    desired_bearings=None,
    tol: Tolerances = Tolerances(),
) -> SpectralFlags:
    """Is the spectrum real and nonnegative, and is the zero eigenvalue simple
    in the semisimple sense (algebraic multiplicity = null-space dimension)?

    Thresholds are relative to the largest eigenvalue magnitude; a defective
    zero (algebraic > geometric multiplicity) blocks convergence of the flow
    even when no eigenvalue crosses into the left half plane.
    """
    L = bearing_laplacian_blocks(f, desired_bearings)
    spec = eigenvalues(L)
    scale = float(np.abs(spec).max()) if spec.size else 0.0
    if scale == 0.0:
        return SpectralFlags(True, False, False)
    imag_ok = float(np.abs(spec.imag).max()) <= tol.spectrum_rel * scale
    min_re = float(spec.real.min())
    nonneg_ok = min_re >= -tol.spectrum_rel * scale
    dim_null = f.d * f.n - numerical_rank(L, tol.rank_rel)
    _, _, defective = _zero_multiplicities(spec, dim_null, tol.zero_eig_abs)
    return SpectralFlags(
        all_real_nonneg=imag_ok and nonneg_ok,
        has_negative_real_part=min_re < -tol.spectrum_rel * scale,
        defective_zero=defective,
    )


@dataclass(frozen=True)
class AcyclicConditions:
    """Witnesses for the acyclic non-equivalence screens.

    cond_I: at least two vertices with no out-going edge;
    cond_II: at least two vertices with exactly one out-going edge;
    cond_III: at least two vertices, each of out-degree >= 2, whose
    out-going bearings are all pairwise parallel.  Degree-1 vertices are
    trivially collinear, so a broader witness list including them is
    reported separately; the boolean uses the >= 2 reading because the
    degree-1 case is already cond_II's.
    """

    cond_I: bool
    cond_II: bool
    cond_III: bool
    witnesses_I: list[int]
    witnesses_II: list[int]
    witnesses_III: list[int]
    witnesses_III_with_single: list[int]


def acyclic_nonequivalence_conditions(
    f: DirectedFormation, tol: float = PARALLEL_TOL
) -> AcyclicConditions:
    """Screen an acyclic formation for the structural causes of extra null
    space in its bearing Laplacian.  Any true condition forces the null
    space strictly beyond the trivial motions."""
    if not is_acyclic(f.graph):
        raise NotAcyclicError("the non-equivalence screens apply to acyclic graphs")
    deg = out_degree_profile(f.graph)
    leaders = [v + 1 for v, d in enumerate(deg) if d == 0]
    singles = [v + 1 for v, d in enumerate(deg) if d == 1]
    collinear_multi = [
        v + 1
        for v, d in enumerate(deg)
        if d >= 2 and outgoing_collinear(f, v + 1, tol)
    ]
    collinear_any = sorted(collinear_multi + singles)
    return AcyclicConditions(
        cond_I=len(leaders) >= 2,
        cond_II=len(singles) >= 2,
        cond_III=len(collinear_multi) >= 2,
        witnesses_I=leaders,
        witnesses_II=singles,
        witnesses_III=collinear_multi,
        witnesses_III_with_single=collinear_any,
    )


def two_edge_sufficient_condition(
    f: DirectedFormation, tol: float = PARALLEL_TOL
) -> bool:
    """Every vertex has out-degree <= 2, and each out-degree-2 vertex has
    non-parallel out-going bearings.

    When this holds and the formation is infinitesimally bearing rigid, the
    Laplacian's null space equals the rigidity matrix's.  The condition is
    sufficient, not necessary.
    """
    deg = out_degree_profile(f.graph)
    for v, d in enumerate(deg):
        if d > 2:
            return False
        if d == 2 and outgoing_collinear(f, v + 1, tol):
            return False
    return True


def geometric_lff(f: DirectedFormation, tol: float = PARALLEL_TOL) -> bool:
    """Structural leader-first-follower shape plus non-collinear out-edges
    at every vertex of out-degree >= 2."""
    structure = lff_structure(f.graph)
    if not structure.is_structural_lff:
        return False
    deg = out_degree_profile(f.graph)
    return all(
        not outgoing_collinear(f, v + 1, tol)
        for v, d in enumerate(deg)
        if d >= 2
    )


def classify_equivalence(
    f: DirectedFormation, tol: Tolerances = Tolerances()
) -> EquivalenceReport:
    """Full classification of one formation.

    Fills ranks, orthonormal null bases, the Laplacian spectrum, zero
    multiplicities, and all condition flags.  The bearing-equivalence verdict
    is computed directly from the definition (both null spaces equal the
    trivial-motion span) and re-derived through the factored route
    (IBR + trivial kernel-range intersection); a disagreement raises
    ConsistencyError since it can only come from a bug or from a formation
    degenerate beyond the working tolerances.
    """
    R = bearing_rigidity_matrix(f)
    L = bearing_laplacian_blocks(f)
    dn = f.d * f.n

    rank_rb = numerical_rank(R, tol.rank_rel)
    rank_lb = numerical_rank(L, tol.rank_rel)
    null_rb = null_space_basis(R, tol.rank_rel)
    null_lb = null_space_basis(L, tol.rank_rel)
    trivial = trivial_motion_basis(f.config, orthonormalize=True)

    is_ibr = rank_rb == dn - f.d - 1
    kernel_equal = subspace_equal(null_rb, null_lb, tol.subspace)
    is_equivalent = (
        is_ibr
        and kernel_equal
        and subspace_equal(null_lb, trivial, tol.subspace)
    )

    left_t, scaled = scaled_factors(f)
    thm2 = kernel_range_intersection_dim(left_t, scaled, tol.rank_rel) == 0
    if is_equivalent != (is_ibr and thm2):
        raise ConsistencyError(
            "definition-based and factored-route classifications disagree "
            f"(definition: {is_equivalent}, ibr: {is_ibr}, "
            f"kernel-range condition: {thm2})"
        )

    spec = eigenvalues(L)
    alg, geo, defective = _zero_multiplicities(
        spec, dn - rank_lb, tol.zero_eig_abs
    )

    acyclic = is_acyclic(f.graph)
    if acyclic:
        screens = acyclic_nonequivalence_conditions(f, tol.collinear)
        cond_i, cond_ii, cond_iii = screens.cond_I, screens.cond_II, screens.cond_III
    else:
        cond_i = cond_ii = cond_iii = False

    flags = ConditionFlags(
        acyclic=acyclic,
        spanning_root_exists=spanning_root(f.graph) is not None,
        lff=geometric_lff(f, tol.collinear),
        prop_nonequiv_I=cond_i,
        prop_nonequiv_II=cond_ii,
        prop_nonequiv_III=cond_iii,
        prop_two_edge_sufficient=two_edge_sufficient_condition(f, tol.collinear),
        thm2_condition_II_holds=thm2,
    )

    return EquivalenceReport(
        dimension=f.d,
        n_vertices=f.n,
        rank_rb=rank_rb,
        rank_lb=rank_lb,
        dim_null_rb=dn - rank_rb,
        dim_null_lb=dn - rank_lb,
        null_basis_rb=null_rb,
        null_basis_lb=null_lb,
        trivial_dim=trivial.shape[1],
        is_ibr=is_ibr,
        kernel_equal=kernel_equal,
        is_bearing_equivalent=is_equivalent,
        spectrum=spec,
        min_real_part=float(spec.real.min()),
        zero_multiplicity_algebraic=alg,
        zero_multiplicity_geometric=geo,
        defective_zero=defective,
        condition_flags=flags,
        tolerances=tol,
    )
