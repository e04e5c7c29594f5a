"""Exact point spectrum of periodic Jacobi operators on universal covering
trees of finite weighted multigraphs: certificates with atom masses,
explicit eigenvectors, lift experiments, and perturbation probes.
"""

from .aomoto import (
    AuxGraph,
    CandidateSet,
    PointSpectrumCertificate,
    PointSpectrumResult,
    aux_graph,
    candidate_sets,
    candidate_sets_exhaustive,
    index,
    point_spectrum,
    zero_potential_prune,
)
from .covers import (
    CoverBall,
    LiftSpec,
    cover_ball,
    cover_moment,
    format_lift_spec,
    girth_doubling_lift,
    girth_increasing_lift,
    girth_sequence,
    lift,
    lift_with_girth_above,
    parse_lift_spec,
    random_lift,
    random_lift_spec,
    regular_rep_operator,
)
from .doslab import (
    AomotoSetEstimate,
    DeltaRadius,
    GaugeReport,
    MomentReport,
    PerturbationReport,
    SpectralMeasureEstimate,
    aomoto_set_estimate,
    atom_mass_estimate,
    delta_radius,
    empirical_measure,
    fiber_partition,
    gauge_invariance_check,
    graph_moment,
    moment_convergence_check,
    perturbation_probe,
    random_perturbation,
    sample_rng,
)
from .eigvec import (
    MultiplicityReport,
    TreeKernelBasis,
    UnitaryWeighting,
    induced_edge_map,
    multiplicity_check,
    phi_kernel,
    tree_kernel,
    unitary_jacobi_matrix,
    unitary_tree_kernel,
)
from .errors import (
    BudgetError,
    GraphParseError,
    KernelSearchError,
    LiftError,
    MultigraphError,
    VerificationFailure,
)
from .exactnum import (
    GaussianRational,
    format_rational,
    format_weight,
    parse_rational,
    parse_weight,
)
from .multigraph import Multigraph, format_graph, parse_graph
from .polynomials import (
    AlgebraicReal,
    RationalPolynomial,
    format_polynomial,
    irreducible_factors,
    isolate_real_roots,
    parse_polynomial,
    poly,
    poly_gcd,
    squarefree_part,
)
from .spectral import (
    GaugeNormalization,
    JacobiMatrix,
    eig_hermitian,
    forest_spectrum,
    gauge_normalize,
    jacobi_matrix,
    tree_char_poly,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraicReal",
    "AomotoSetEstimate",
    "AuxGraph",
    "BudgetError",
    "CandidateSet",
    "CoverBall",
    "DeltaRadius",
    "GaugeNormalization",
    "GaugeReport",
    "GaussianRational",
    "GraphParseError",
    "JacobiMatrix",
    "KernelSearchError",
    "LiftError",
    "LiftSpec",
    "MomentReport",
    "Multigraph",
    "MultigraphError",
    "MultiplicityReport",
    "PerturbationReport",
    "PointSpectrumCertificate",
    "PointSpectrumResult",
    "RationalPolynomial",
    "SpectralMeasureEstimate",
    "TreeKernelBasis",
    "UnitaryWeighting",
    "VerificationFailure",
    "aomoto_set_estimate",
    "atom_mass_estimate",
    "aux_graph",
    "candidate_sets",
    "candidate_sets_exhaustive",
    "cover_ball",
    "cover_moment",
    "delta_radius",
    "eig_hermitian",
    "empirical_measure",
    "fiber_partition",
    "forest_spectrum",
    "format_graph",
    "format_lift_spec",
    "format_polynomial",
    "format_rational",
    "format_weight",
    "gauge_invariance_check",
    "gauge_normalize",
    "girth_doubling_lift",
    "girth_increasing_lift",
    "girth_sequence",
    "graph_moment",
    "index",
    "induced_edge_map",
    "irreducible_factors",
    "isolate_real_roots",
    "jacobi_matrix",
    "lift",
    "lift_with_girth_above",
    "moment_convergence_check",
    "multiplicity_check",
    "parse_graph",
    "parse_lift_spec",
    "parse_polynomial",
    "parse_rational",
    "parse_weight",
    "perturbation_probe",
    "phi_kernel",
    "point_spectrum",
    "poly",
    "poly_gcd",
    "random_lift",
    "random_lift_spec",
    "random_perturbation",
    "sample_rng",
    "regular_rep_operator",
    "squarefree_part",
    "tree_char_poly",
    "tree_kernel",
    "unitary_jacobi_matrix",
    "unitary_tree_kernel",
    "zero_potential_prune",
]
