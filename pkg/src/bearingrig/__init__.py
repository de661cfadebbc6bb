"""Bearing rigidity and bearing Laplacian toolkit for directed formations.

Build the rigidity matrix and bearing Laplacian of a directed formation in
R^d, classify bearing equivalence from their ranks, null spaces, and
spectra, and simulate the linear bearing-based formation flow.
"""

__version__ = "0.1.0"

from .analysis import (
    AcyclicConditions,
    ConditionFlags,
    EquivalenceReport,
    SpectralFlags,
    Tolerances,
    acyclic_nonequivalence_conditions,
    classify_equivalence,
    eigenvalues,
    geometric_lff,
    is_infinitesimally_bearing_rigid,
    kernel_range_intersection_dim,
    null_space_basis,
    numerical_rank,
    range_basis,
    spectrum_classification,
    subspace_equal,
    two_edge_sufficient_condition,
)
from .dynamics import (
    SimulationTrace,
    TargetSpec,
    agent_velocity,
    bearing_error,
    detect_verdict,
    simulate,
    target_from_configuration,
)
from .geometry import (
    Configuration,
    DirectedFormation,
    GenSpec,
    are_parallel,
    bearing,
    bearing_function,
    bearings,
    edge_lengths,
    edge_vectors,
    generate,
    grow,
    lift,
    make_formation,
    out_bearings,
    outgoing_collinear,
    projection,
    trivial_motion_basis,
)
from .graphs import (
    DirectedGraph,
    LffStructure,
    incidence_matrix,
    is_acyclic,
    lff_structure,
    observer_selector_matrix,
    out_degree_profile,
    spanning_root,
    topological_order,
    validate_graph,
)
from .operators import (
    OperatorBundle,
    bearing_laplacian_blocks,
    bearing_laplacian_factored,
    bearing_rigidity_matrix,
    operator_bundle,
    scaled_factors,
    undirected_bearing_laplacian,
)

__all__ = [
    "__version__",
    # graphs
    "DirectedGraph",
    "LffStructure",
    "validate_graph",
    "incidence_matrix",
    "observer_selector_matrix",
    "out_degree_profile",
    "is_acyclic",
    "topological_order",
    "spanning_root",
    "lff_structure",
    # geometry
    "Configuration",
    "DirectedFormation",
    "GenSpec",
    "make_formation",
    "projection",
    "bearing",
    "bearings",
    "bearing_function",
    "edge_vectors",
    "edge_lengths",
    "are_parallel",
    "out_bearings",
    "outgoing_collinear",
    "trivial_motion_basis",
    "lift",
    "grow",
    "generate",
    # operators
    "OperatorBundle",
    "operator_bundle",
    "bearing_rigidity_matrix",
    "bearing_laplacian_blocks",
    "bearing_laplacian_factored",
    "scaled_factors",
    "undirected_bearing_laplacian",
    # analysis
    "Tolerances",
    "ConditionFlags",
    "EquivalenceReport",
    "SpectralFlags",
    "AcyclicConditions",
    "numerical_rank",
    "null_space_basis",
    "range_basis",
    "subspace_equal",
    "eigenvalues",
    "kernel_range_intersection_dim",
    "is_infinitesimally_bearing_rigid",
    "classify_equivalence",
    "acyclic_nonequivalence_conditions",
    "two_edge_sufficient_condition",
    "spectrum_classification",
    "geometric_lff",
    # dynamics
    "TargetSpec",
    "SimulationTrace",
    "target_from_configuration",
    "agent_velocity",
    "bearing_error",
    "simulate",
    "detect_verdict",
]
