"""Gibbs samplers for the Bayesian Huberized lasso.
HBLSampler learns eta with the gamma approximation (or keeps it fixed when
hyper.eta_mode == "fixed"); HBLFixedEtaSampler always keeps it fixed.
"""
import logging
from typing import List, Optional, Tuple

import numpy as np

from hblasso.core.config import FitConfig
from hblasso.distributions.rng import RngStream
from hblasso.eta.approx import GammaApprox, sample_eta
from hblasso.model.types import ChainState, Dataset, Hyperparams
from hblasso.samplers.base import BaseSampler, labelled
from hblasso.samplers.updates import (Prior, initial_state, update_beta, update_lambda2,
                                      update_rho2, update_sigma2, update_tau2)

logger = logging.getLogger(__name__)


def gibbs_sweep(state: ChainState, data: Dataset, hyper: Hyperparams, rng: RngStream,
                prior: Prior = "conditional") -> Tuple[ChainState, Optional[GammaApprox]]:
    """One sweep in the order beta, rho2, tau2, sigma2, lambda2, eta.
    Returns the new state and the gamma approximation used for eta (None when fixed).
    """
    with labelled("beta"):
        beta = update_beta(state, data, rng, prior)
        state = state.evolve(beta=beta)
    with labelled("rho2"):
        state = state.evolve(rho2=update_rho2(state, data, rng, prior))
    with labelled("tau2"):
        tau2 = update_tau2(state, rng, prior)
    with labelled("sigma2"):
        sigma2 = update_sigma2(state, data, rng)
    state = state.evolve(tau2=tau2, sigma2=sigma2)
    if hyper.lambda_mode == "learned":
        with labelled("lambda2"):
            state = state.evolve(lambda2=update_lambda2(state, hyper, rng))
    approx = None
    if hyper.eta_mode == "learned":
        with labelled("eta"):
            eta, approx = sample_eta(state.sigma2, state.rho2, hyper, rng)
            state = state.evolve(eta=eta)
    return state, approx


def gibbs_step(state: ChainState, data: Dataset, config: FitConfig, rng: RngStream) -> ChainState:
    """One sweep of the approximate Gibbs sampler (eta untouched when fixed)."""
    return gibbs_sweep(state, data, config.hyper, rng)[0]


class HBLSampler(BaseSampler):
    """Approximate Gibbs sampler for the Bayesian Huberized lasso."""
    prior: Prior = "conditional"

    @property
    def name(self) -> str:
        return "HBL"

    @property
    def hyper(self) -> Hyperparams:
        return self.config.hyper

    def initial_state(self, data: Dataset) -> ChainState:
        return initial_state(data, self.hyper)

    def reset_info(self):
        self.info = {"fp_calls": 0, "fp_converged": 0, "fp_iterations": 0}

    def step(self, state: ChainState, data: Dataset, rng: RngStream) -> ChainState:
        state, approx = gibbs_sweep(state, data, self.hyper, rng, self.prior)
        if approx is not None:
            self.info["fp_calls"] += 1
            self.info["fp_converged"] += int(approx.converged)
            self.info["fp_iterations"] += approx.iterations_used
        return state

    def state_names(self, data: Dataset) -> List[str]:
        names = [f"beta_{j + 1}" for j in range(data.p)] + ["rho2", "lambda2", "eta"]
        if self.config.store_full_state:
            names += [f"tau2_{j + 1}" for j in range(data.p)]
            names += [f"sigma2_{i + 1}" for i in range(data.n)]
        return names

    def record(self, state: ChainState) -> np.ndarray:
        parts = [state.beta, [state.rho2, state.lambda2, state.eta]]
        if self.config.store_full_state:
            parts += [state.tau2, state.sigma2]
        return np.concatenate([np.asarray(part, dtype=float) for part in parts])

    def finalize_info(self):
        calls = self.info.get("fp_calls", 0)
        if not calls:
            return {"eta_fixed_point_rate": float("nan"), "eta_fixed_point_mean_iterations": float("nan")}
        rate = self.info["fp_converged"] / calls
        mean_iter = self.info["fp_iterations"] / calls
        logger.info("eta fixed point converged in %.1f%% of %d updates (mean %.2f iterations)",
                    100.0 * rate, calls, mean_iter)
        return {"eta_fixed_point_rate": rate, "eta_fixed_point_mean_iterations": mean_iter}


class HBLFixedEtaSampler(HBLSampler):
    """Gibbs sampler with eta held at hyper.eta."""
    def __init__(self, config: FitConfig):
        super().__init__(config.updated(hyper=config.hyper.model_copy(update={"eta_mode": "fixed"})))

    @property
    def name(self) -> str:
        return "HBL_fixed_eta"
