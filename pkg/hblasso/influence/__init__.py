"""Bayesian influence functions for the hyperbolic linear model."""
from hblasso.influence.functions import (
    FlatPriorHLMSampler,
    InfluenceGrid,
    fit_flat_prior_hlm,
    influence_function,
    influence_grid,
    simulate_simple_regression,
)

__all__ = [
    "InfluenceGrid", "FlatPriorHLMSampler", "fit_flat_prior_hlm",
    "influence_function", "influence_grid", "simulate_simple_regression",
]
