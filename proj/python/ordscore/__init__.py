"""Optimized numeric scores for ordered factors in regression models."""

from ._ordscore import (
    MonotoneCubic,
    OrdscoreError,
    build_spline,
    fit_glm,
    fit_ols,
    gh_quantile,
    gh_scores,
    integer_scores,
    normal_quantile,
    optimize,
    polynomial_contrasts,
    run,
    spline_scores,
)

__all__ = [
    "MonotoneCubic",
    "OrdscoreError",
    "build_spline",
    "fit_glm",
    "fit_ols",
    "gh_quantile",
    "gh_scores",
    "integer_scores",
    "normal_quantile",
    "optimize",
    "polynomial_contrasts",
    "run",
    "spline_scores",
]
