"""Forward and inverse spectral computations for the Sturm-Liouville
operator -y'' + q(x) y = lambda^2 rho(x) y with an analytic exponential
potential and an indefinite two-piece density."""

from .coeffs import (
    CoefficientTable,
    FourierPotential,
    TailReport,
    TruncationWarning,
    build_table,
    harmonics_from_table,
    recurrence_residuals,
    table_from_diagonal,
    tail_report,
    tail_weight,
)
from .errors import (
    BudgetExceeded,
    ContourThroughZero,
    ExtrapolationDivergence,
    InsufficientSamples,
    NearSpectrum,
    NoData,
    NonRealBeta,
    PoleProximity,
    SchemaError,
    SpectralError,
    ZeroWavenumber,
)
from .inverse import (
    AnalyticProvider,
    ReconstructionResult,
    SampledProvider,
    recover_beta,
    recover_diagonal,
    reconstruct,
    sampled_provider,
)
from .scattering import (
    ConnectionCoefficients,
    c11_pole_strength,
    coefficient_evaluators,
    connection_coefficients,
    pole_strength,
    wronskian,
)
from .solutions import (
    POLE_TOL,
    SolutionSample,
    eval_f1,
    eval_f2,
    eval_fn_limit,
    extend_across_zero,
    ode_residual,
)
from .spectrum import (
    EigenvalueHit,
    Sector,
    Singularity,
    SpectrumReport,
    find_eigenvalues,
    find_zeros,
    resolvent_kernel,
    resolvent_residue,
    scan_spectrum,
    spectral_singularities,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticProvider",
    "BudgetExceeded",
    "CoefficientTable",
    "ConnectionCoefficients",
    "ContourThroughZero",
    "EigenvalueHit",
    "ExtrapolationDivergence",
    "FourierPotential",
    "InsufficientSamples",
    "NearSpectrum",
    "NoData",
    "NonRealBeta",
    "POLE_TOL",
    "PoleProximity",
    "ReconstructionResult",
    "SampledProvider",
    "SchemaError",
    "Sector",
    "Singularity",
    "SolutionSample",
    "SpectralError",
    "SpectrumReport",
    "TailReport",
    "TruncationWarning",
    "ZeroWavenumber",
    "build_table",
    "c11_pole_strength",
    "coefficient_evaluators",
    "connection_coefficients",
    "eval_f1",
    "eval_f2",
    "eval_fn_limit",
    "extend_across_zero",
    "find_eigenvalues",
    "find_zeros",
    "harmonics_from_table",
    "ode_residual",
    "pole_strength",
    "recover_beta",
    "recover_diagonal",
    "reconstruct",
    "recurrence_residuals",
    "resolvent_kernel",
    "resolvent_residue",
    "sampled_provider",
    "scan_spectrum",
    "spectral_singularities",
    "table_from_diagonal",
    "tail_report",
    "tail_weight",
    "wronskian",
]
