"""Pseudospectra through the lower-norm field, Hausdorff distances of sampled
sublevel sets and empirical convergence diagnostics."""

from .convergence import (
    AnalyticSequence,
    ConvergenceReport,
    SandwichVerdict,
    consecutive_hausdorff,
    equivalence_report,
    hausdorff_check,
    normal_corollary_check,
    pointwise_check,
    sandwich_check,
    shared_grid,
)
from .estimators import ConvergenceDiagnostic, Pseudospectrum
from .exceptions import ContractError, ConvergenceFailure, InputError
from .levelsets import (
    AnalyticFamily,
    GridSpec,
    RegionSample,
    ScalarField,
    boundary_polyline,
    bounding_radius,
    evaluate_field,
    field_values,
    sublevel,
)
from .numkernel import batched_mu, lower_norm_sampled, mu, op_norm, sigma_min, svd
from .operators import (
    BandOperator,
    Const,
    ExplicitSequence,
    PerturbationSequence,
    Periodic,
    Perturbed,
    SectionSequence,
    embed_matrix,
    finite_section,
    shift_operator,
    shifted,
    window_lower_norm,
)
from .rng import SplitMix64
from .setgeom import (
    Annulus,
    Disk,
    Plane,
    SetSequence,
    UnionOfDisks,
    difference_with_margin,
    dist_point,
    hausdorff,
    hausdorff_brute,
    hausdorff_symbolic,
    liminf_estimate,
    limsup_estimate,
)

__version__ = "0.1.0"
