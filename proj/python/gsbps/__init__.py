"""Gibbs sampling for Bayesian P-splines (Poisson, binomial and negative binomial models)."""

from ._core import (
    GsbpsError,
    design_matrix,
    fit_binomial,
    fit_density,
    fit_negbin,
    geweke_z,
    penalty_matrix,
)

__all__ = [
    "GsbpsError",
    "design_matrix",
    "fit_binomial",
    "fit_density",
    "fit_negbin",
    "geweke_z",
    "penalty_matrix",
]
