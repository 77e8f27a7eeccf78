"""Random streams and variate generators."""
from hblasso.distributions.rng import GigParams, RngStream
from hblasso.distributions.variates import (
    sample_exp,
    sample_gamma,
    sample_gig,
    sample_gig_ab,
    sample_hyperbolic,
    sample_inv_gamma,
    sample_inv_gauss,
    sample_mvn_from_precision,
)

__all__ = [
    "RngStream", "GigParams",
    "sample_gig", "sample_gig_ab", "sample_inv_gauss", "sample_gamma", "sample_exp",
    "sample_inv_gamma", "sample_mvn_from_precision", "sample_hyperbolic",
]
