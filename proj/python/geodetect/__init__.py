"""Covariance-manifold detection toolkit: dissimilarity measures between HPD
Toeplitz covariances, per-measure matrix means, measure-optimal dimension
reduction, and the clutter/target simulation behind the study CLI."""

from ._core import (
    ConfigError,
    DimensionError,
    DomainError,
    EnhancementResult,
    Error,
    __version__,
    adjusted_gradient,
    adjusted_potential,
    asymptotic_spectrum_gap,
    check_affine_invariance,
    check_equivalence,
    correlation_lags,
    dft_power_spectrum,
    enhanced_mapping,
    enhanced_measure,
    extremal_spectra,
    generate_clutter,
    generate_target,
    interlace_bounds,
    mean_matrix,
    measure,
    optimal_enhancement_dimension,
    optimal_reduced_spectrum,
    potential,
    scale_to_scr,
    spectrum_from_lags,
    test_statistic,
    toeplitz_covariance,
    whitening_spectrum,
)

__all__ = [
    "ConfigError",
    "DimensionError",
    "DomainError",
    "EnhancementResult",
    "Error",
    "__version__",
    "adjusted_gradient",
    "adjusted_potential",
    "asymptotic_spectrum_gap",
    "check_affine_invariance",
    "check_equivalence",
    "correlation_lags",
    "dft_power_spectrum",
    "enhanced_mapping",
    "enhanced_measure",
    "extremal_spectra",
    "generate_clutter",
    "generate_target",
    "interlace_bounds",
    "mean_matrix",
    "measure",
    "optimal_enhancement_dimension",
    "optimal_reduced_spectrum",
    "potential",
    "scale_to_scr",
    "spectrum_from_lags",
    "test_statistic",
    "toeplitz_covariance",
    "whitening_spectrum",
]
