"""Gibbs sampler under the unconditional Laplace prior pi(beta) = prod (lam/2) exp(-lam |beta_j|).
Used to contrast with the conditional prior: here the joint posterior of
(beta, rho2) can be multimodal. lambda and eta are held fixed.
"""
from hblasso.core.config import FitConfig
from hblasso.samplers.hbl import HBLSampler


class UnconditionalPriorSampler(HBLSampler):
    """HBL sweep with beta_j | tau2_j ~ N(0, tau2_j) and fixed (lambda, eta)."""
    prior = "unconditional"

    def __init__(self, config: FitConfig):
        hyper = config.hyper.model_copy(update={"eta_mode": "fixed", "lambda_mode": "fixed"})
        super().__init__(config.updated(hyper=hyper))

    @property
    def name(self) -> str:
        return "HBL_unconditional_prior"
