"""Closed-form and numerical evaluation of spherically symmetric scalar
waves on an exponentially expanding background, with flat-space solvers,
a finite-difference cross-check, and late-time decay analysis."""

from .errors import (
    ConfigError,
    DegenerateFit,
    DivergentSeries,
    DomainError,
    InstabilityDetected,
    InvalidParam,
    NonFiniteIntegrand,
    QuadratureFailure,
    TailNotNegligible,
    ToleranceNotMet,
    UnsupportedEll,
)
from .quadrature import (
    DEFAULT_SPEC,
    IntegralResult,
    OscillatoryTruncation,
    QuadratureSpec,
    integrate_finite,
    integrate_semi_infinite_oscillatory,
)
from .specfun import (
    assoc_laguerre,
    bessel_j_half,
    hyp2f1,
    spherical_harmonic,
    upper_incomplete_gamma,
)
from .kernels import (
    KernelEval,
    PhysicalParams,
    huygens_k0,
    huygens_k1,
    kernel_combination,
    kernel_eval,
    kernel_k0,
    kernel_k1,
    phi_of_t,
)
from .minkowski import (
    ModeState,
    RadialProfile,
    gaussian_profile,
    hankel_transform,
    minkowski_kg,
    scaled_profile,
    solve_hankel,
    solve_recursive,
    solve_riemann,
    tabulated_profile,
    traveling_average,
    wave_block,
)
from .desitter import (
    ALPHA_FS,
    DecayReport,
    DeSitterField,
    FieldGrid,
    FieldSample,
    decay_classify,
    decay_fit,
    evaluate_grid,
    field_hankel,
    field_hankel_huygens,
    field_riemann,
    field_riemann_huygens,
    ita_assemble,
    ita_remainder,
    pionic_mode,
    pionic_profile,
)
from .oracle import FDConfig, solve_fd

__version__ = "0.1.0"

__all__ = [
    "ALPHA_FS",
    "ConfigError",
    "DEFAULT_SPEC",
    "DecayReport",
    "DeSitterField",
    "DegenerateFit",
    "DivergentSeries",
    "DomainError",
    "FDConfig",
    "FieldGrid",
    "FieldSample",
    "InstabilityDetected",
    "IntegralResult",
    "InvalidParam",
    "KernelEval",
    "ModeState",
    "NonFiniteIntegrand",
    "OscillatoryTruncation",
    "PhysicalParams",
    "QuadratureFailure",
    "QuadratureSpec",
    "RadialProfile",
    "TailNotNegligible",
    "ToleranceNotMet",
    "UnsupportedEll",
    "assoc_laguerre",
    "bessel_j_half",
    "decay_classify",
    "decay_fit",
    "evaluate_grid",
    "field_hankel",
    "field_hankel_huygens",
    "field_riemann",
    "field_riemann_huygens",
    "gaussian_profile",
    "hankel_transform",
    "huygens_k0",
    "huygens_k1",
    "hyp2f1",
    "integrate_finite",
    "integrate_semi_infinite_oscillatory",
    "ita_assemble",
    "ita_remainder",
    "kernel_combination",
    "kernel_eval",
    "kernel_k0",
    "kernel_k1",
    "minkowski_kg",
    "phi_of_t",
    "pionic_mode",
    "pionic_profile",
    "scaled_profile",
    "solve_fd",
    "solve_hankel",
    "solve_recursive",
    "solve_riemann",
    "spherical_harmonic",
    "tabulated_profile",
    "traveling_average",
    "upper_incomplete_gamma",
    "wave_block",
    "__version__",
]
