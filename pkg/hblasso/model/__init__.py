"""Model types, losses and log posteriors."""
from hblasso.model.losses import (
    HUBER_C,
    PSEUDO_HUBER_C,
    huber,
    hyperbolic_logpdf,
    hyperbolic_loss,
    loss_table,
    pseudo_huber,
)
from hblasso.model.posterior import (
    log_joint_posterior,
    log_joint_posterior_transformed,
    log_joint_posterior_unconditional,
)
from hblasso.model.types import ChainState, Dataset, Hyperparams, PosteriorSamples

__all__ = [
    "Dataset", "Hyperparams", "ChainState", "PosteriorSamples",
    "hyperbolic_loss", "pseudo_huber", "huber", "hyperbolic_logpdf", "loss_table",
    "HUBER_C", "PSEUDO_HUBER_C",
    "log_joint_posterior", "log_joint_posterior_transformed", "log_joint_posterior_unconditional",
]
