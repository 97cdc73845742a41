"""Spectral gaps, half-space stability and isoperimetric bounds for
product probability measures."""

from .errors import (
    DimensionMismatch,
    DomainError,
    GridTooNarrow,
    HypothesisViolated,
    InfeasibleBasis,
    NoConvergence,
    NonConvexPotential,
    NonDifferentiablePoint,
    NonEvenBump,
    NotLogConcave,
    OutOfBudget,
    ProdisoError,
    SignedWeight,
    SingularShift,
)
from .halfspace import (
    HalfSpace,
    StabilityVerdict,
    StationarityVerdict,
    boundary_density,
    boundary_measure,
    classify_stationary,
    coordinate_stability,
    coordinate_stable_region,
    mean_curvature_residual,
    noncoordinate_stability,
    projection_density,
)
from .isoprofile import (
    ProfileBounds,
    clt_upper_bound,
    compute_c,
    compute_c_maximizer,
    profile_1d,
    profile_envelope,
    tensor_lower_bound,
)
from .measures import BumpFunction, MeasureSpec
from .numerics import Grid, TabulatedDensity, integrate, self_convolve_scaled, tabulate
from .perturb import (
    PerturbationReport,
    design_bump,
    eigen_curves,
    finite_diff_validate,
    perturbation_slopes,
)
from .spectral import (
    ConditionCheck,
    EigenProblem,
    EigenResult,
    GapOptions,
    TensorOracleResult,
    assemble,
    brascamp_lieb_residual,
    check_P1,
    check_P2,
    random_oracle_instance,
    solve_smallest,
    spectral_gap,
    tensor_oracle_2d,
)

__version__ = "0.1.0"

__all__ = [
    "BumpFunction",
    "ConditionCheck",
    "DimensionMismatch",
    "DomainError",
    "EigenProblem",
    "EigenResult",
    "GapOptions",
    "Grid",
    "GridTooNarrow",
    "HalfSpace",
    "HypothesisViolated",
    "InfeasibleBasis",
    "MeasureSpec",
    "NoConvergence",
    "NonConvexPotential",
    "NonDifferentiablePoint",
    "NonEvenBump",
    "NotLogConcave",
    "OutOfBudget",
    "PerturbationReport",
    "ProdisoError",
    "ProfileBounds",
    "SignedWeight",
    "SingularShift",
    "StabilityVerdict",
    "StationarityVerdict",
    "TabulatedDensity",
    "TensorOracleResult",
    "assemble",
    "boundary_density",
    "boundary_measure",
    "brascamp_lieb_residual",
    "check_P1",
    "check_P2",
    "classify_stationary",
    "clt_upper_bound",
    "compute_c",
    "compute_c_maximizer",
    "coordinate_stability",
    "coordinate_stable_region",
    "design_bump",
    "eigen_curves",
    "finite_diff_validate",
    "integrate",
    "mean_curvature_residual",
    "noncoordinate_stability",
    "perturbation_slopes",
    "profile_1d",
    "profile_envelope",
    "projection_density",
    "random_oracle_instance",
    "self_convolve_scaled",
    "solve_smallest",
    "spectral_gap",
    "tabulate",
    "tensor_lower_bound",
    "tensor_oracle_2d",
]
