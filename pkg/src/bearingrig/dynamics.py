"""The bearing-based formation flow and its convergence diagnostics.

Given a target bearing g*_k per edge, each agent steers with the local law

    pdot_i = - sum over out-edges (i, j) of  P(g*_ij) (p_i - p_j),

whose stacked form is the linear system pdot = -L p with L the bearing
Laplacian built from the target bearings.  Agents with no out-edges never
move.  Whether the flow converges to the target shape is decided by the
spectrum and null space of L: eigenvalues with negative real parts (possible
for cyclic graphs at particular positions) make it diverge, extra null
directions make it converge to the wrong shape.

The production integrator is fixed-step classical Runge-Kutta; the system is
linear, so the matrix exponential serves as an independent oracle in tests
rather than as the production path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import (
    ConsistencyError,
    NonUnitDesiredBearingError,
    StateOverflowError,
    StepSizeInvalidError,
)
from .geometry import Configuration, DirectedFormation, bearings
from .graphs import DirectedGraph
from .operators import bearing_laplacian_blocks
from .analysis import SpectralFlags, Tolerances, spectrum_classification

#: Bearing-error sum below which a run can count as converged.
CONVERGENCE_TOL = 1e-6

#: State change per unit time below which the flow counts as stationary.
STATIONARY_TOL = 1e-8

#: Norm growth ratio over the initial state that flags divergence.
DIVERGENCE_RATIO = 1e6

#: Any coordinate beyond this magnitude aborts integration as diverged.
OVERFLOW_LIMIT = 1e12

#: Agreement required between the per-agent law and the stacked matrix form.
AGENT_MATRIX_TOL = 1e-12


@dataclass(frozen=True)
class TargetSpec:
    """A directed graph plus one desired unit bearing per edge."""

    graph: DirectedGraph
    bearings: NDArray[np.float64]

    def __post_init__(self):
        b = np.asarray(self.bearings, dtype=np.float64)
        if b.ndim != 2 or b.shape[0] != self.graph.m:
            raise ValueError(
                f"expected one bearing per edge ({self.graph.m}), got shape {b.shape}"
            )
        norms = np.linalg.norm(b, axis=1)
        bad = np.abs(norms - 1.0) > 1e-9
        if bad.any():
            k = int(np.argmax(bad))
            raise NonUnitDesiredBearingError(
                f"target bearing {k + 1} has norm {norms[k]:.12f}, expected 1"
            )
        object.__setattr__(self, "bearings", b)

    @property
    def d(self) -> int:
        return self.bearings.shape[1]


def target_from_configuration(graph: DirectedGraph, config: Configuration) -> TargetSpec:
    """Freeze the bearings of a reference configuration as the target."""
    return TargetSpec(graph, bearings(DirectedFormation(graph, config)))


def agent_velocity(i: int, config: Configuration, target: TargetSpec) -> NDArray[np.float64]:
    """Velocity of agent i under the local control law (zero for a leader)."""
    pts = config.points
    v = np.zeros(config.d)
    for k, (src, dst) in enumerate(target.graph.edges):
        if src != i:
            continue
        g = target.bearings[k]
        rel = pts[src - 1] - pts[dst - 1]
        v -= rel - g * (g @ rel)  # P(g) rel without forming the matrix
    return v


def _velocity_stack(points: np.ndarray, target: TargetSpec) -> np.ndarray:
    v = np.zeros_like(points)
    for k, (src, dst) in enumerate(target.graph.edges):
        g = target.bearings[k]
        rel = points[src - 1] - points[dst - 1]
        v[src - 1] -= rel - g * (g @ rel)
    return v


def bearing_error(config: Configuration, target: TargetSpec) -> float:
    """Sum over edges of ||P(g*_k) g_k||: zero iff every current bearing is
    parallel to its target, i.e. the shapes agree edge-by-edge."""
    current = bearings(DirectedFormation(target.graph, config))
    total = 0.0
    for k in range(target.graph.m):
        g_star = target.bearings[k]
        g = current[k]
        residual = g - g_star * (g_star @ g)
        total += float(np.linalg.norm(residual))
    return total


@dataclass(frozen=True)
class SimulationTrace:
    """Uniformly sampled trajectory of the formation flow.

    states has shape (samples, n, d); verdict is one of "converged",
    "diverged", "inconclusive"; spectral_flags classifies the spectrum of
    the Laplacian that generated the flow.
    """

    times: NDArray[np.float64]
    states: NDArray[np.float64]
    bearing_errors: NDArray[np.float64]
    verdict: str
    spectral_flags: SpectralFlags


def detect_verdict(
    times,
    states,
    bearing_errors,
    convergence_tol: float = CONVERGENCE_TOL,
    stationary_tol: float = STATIONARY_TOL,
    divergence_ratio: float = DIVERGENCE_RATIO,
) -> str:
    """Classify a sampled trajectory.

    diverged: some sampled state norm exceeds divergence_ratio times the
    initial norm.  converged: final bearing error within convergence_tol and
    final state change per unit time within stationary_tol.  Anything else
    is inconclusive.
    """
    times = np.asarray(times, dtype=np.float64)
    states = np.asarray(states, dtype=np.float64)
    errors = np.asarray(bearing_errors, dtype=np.float64)
    if times.size < 2:
        raise ValueError("need at least two samples to classify a trajectory")
    flat = states.reshape(states.shape[0], -1)
    norms = np.linalg.norm(flat, axis=1)
    base = norms[0] if norms[0] > 0 else 1.0
    if (norms / base).max() > divergence_ratio:
        return "diverged"
    rate = np.linalg.norm(flat[-1] - flat[-2]) / (times[-1] - times[-2])
    if errors[-1] <= convergence_tol and rate <= stationary_tol:
        return "converged"
    return "inconclusive"


def simulate(
    target: TargetSpec,
    p0: Configuration,
    dt: float,
    t_end: float,
    output_stride: int = 10,
    convergence_tol: float = CONVERGENCE_TOL,
    stationary_tol: float = STATIONARY_TOL,
    divergence_ratio: float = DIVERGENCE_RATIO,
    overflow_limit: float = OVERFLOW_LIMIT,
    tolerances: Tolerances = Tolerances(),
) -> SimulationTrace:
    """Integrate pdot = -L p from p0 with fixed-step classical RK4.

    Samples are recorded every output_stride steps (uniform spacing; the
    horizon is truncated to a whole number of output intervals).  At every
    step the stacked per-agent law is checked against -L p to 1e-12, so a
    trace is also a certificate that the local and matrix forms agree.
    Integration stops early, with verdict "diverged", as soon as any
    coordinate exceeds overflow_limit.
    """
    if not np.isfinite(dt) or dt <= 0.0:
        raise StepSizeInvalidError(f"dt must be positive, got {dt}")
    if t_end < dt:
        raise StepSizeInvalidError(f"t_end = {t_end} is shorter than one step")
    if output_stride < 1:
        raise StepSizeInvalidError("output_stride must be >= 1")
    f0 = DirectedFormation(target.graph, p0)
    if float(np.abs(p0.points).max()) > overflow_limit:
        raise StateOverflowError("initial state already exceeds the overflow limit")

    L = bearing_laplacian_blocks(f0, target.bearings)
    flags = spectrum_classification(f0, target.bearings, tolerances)

    n_steps = int(round(t_end / dt))
    n_out = n_steps // output_stride
    n_steps = n_out * output_stride

    n, d = p0.n, p0.d
    pts = p0.points.copy()
    times = [0.0]
    samples = [pts.copy()]
    errors = [bearing_error(Configuration(pts), target)]
    overflow = False

    def rhs(q: np.ndarray) -> np.ndarray:
        return -(L @ q.reshape(-1)).reshape(n, d)

    for step in range(1, n_steps + 1):
        matrix_vel = rhs(pts)
        agent_vel = _velocity_stack(pts, target)
        gap = float(np.abs(agent_vel - matrix_vel).max())
        if gap > AGENT_MATRIX_TOL * max(1.0, float(np.abs(pts).max())):
            raise ConsistencyError(
                f"per-agent and matrix velocities disagree by {gap:.3e} at step {step}"
            )
        k1 = matrix_vel
        k2 = rhs(pts + 0.5 * dt * k1)
        k3 = rhs(pts + 0.5 * dt * k2)
        k4 = rhs(pts + dt * k3)
        pts = pts + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if float(np.abs(pts).max()) > overflow_limit:
            overflow = True
            break
        if step % output_stride == 0:
            times.append(step * dt)
            samples.append(pts.copy())
            errors.append(bearing_error(Configuration(pts), target))

    times_arr = np.array(times)
    states = np.array(samples)
    errors_arr = np.array(errors)
    if overflow:
        verdict = "diverged"
    else:
        verdict = detect_verdict(
            times_arr,
            states,
            errors_arr,
            convergence_tol=convergence_tol,
            stationary_tol=stationary_tol,
            divergence_ratio=divergence_ratio,
        )
    return SimulationTrace(
        times=times_arr,
        states=states,
        bearing_errors=errors_arr,
        verdict=verdict,
        spectral_flags=flags,
    )
