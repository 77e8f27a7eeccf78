"""Full-conditional updates of the Bayesian Huberized lasso.
Model (after centering y and the columns of X):
    y_i | beta, sigma2_i       ~ N(x_i' beta, sigma2_i)
    sigma2_i | eta, rho2       ~ GIG(1, eta, rho2)
    beta_j | tau2_j, rho2      ~ N(0, rho2 tau2_j)        (conditional prior)
    tau2_j | lambda2           ~ Exp(lambda2 / 2)
    rho2 ~ 1/rho2,  lambda2 ~ Ga(a, b),  eta ~ Ga(c, d)
Each function returns the new value of one block and leaves the state untouched.
"""
import logging
from typing import Literal

import numpy as np

from hblasso.distributions.rng import GigParams, RngStream
from hblasso.distributions.variates import (sample_gamma, sample_gig, sample_inv_gauss,
                                            sample_mvn_from_precision)
from hblasso.model.types import ChainState, Dataset, Hyperparams

logger = logging.getLogger(__name__)

#: floor applied to beta_j^2 in the local-scale update
BETA2_FLOOR = 1e-300

Prior = Literal["conditional", "unconditional", "flat"]


def floor_beta2(beta: np.ndarray) -> np.ndarray:
    """beta^2 with tiny entries replaced by BETA2_FLOOR (logged)."""
    beta2 = np.asarray(beta, dtype=float) ** 2
    tiny = np.abs(beta) < BETA2_FLOOR
    if np.any(tiny):
        logger.warning("Degenerate local-scale draw: |beta_j| < %g for j in %s",
                       BETA2_FLOOR, np.flatnonzero(tiny).tolist())
        beta2 = np.where(tiny, BETA2_FLOOR, beta2)
    return np.maximum(beta2, BETA2_FLOOR)


def weighted_normal_draw(data: Dataset, weights: np.ndarray, prior_precision: np.ndarray,
                         rng: RngStream, target: np.ndarray = None) -> np.ndarray:
    """Draw beta ~ N(Q^-1 X' W t, Q^-1) with Q = X' W X + diag(prior_precision).
    `target` defaults to y.
    """
    x = data.x
    t = data.y if target is None else target
    weighted = x * weights[:, None]
    precision = x.T @ weighted
    precision[np.diag_indices_from(precision)] += prior_precision
    h = weighted.T @ t
    return sample_mvn_from_precision(h, precision, rng)


def update_beta(state: ChainState, data: Dataset, rng: RngStream, prior: Prior = "conditional") -> np.ndarray:
    """beta ~ N(A^-1 X' D_sigma^-1 y, A^-1), A = X' D_sigma^-1 X + D_tau^-1 / rho2.
    prior="unconditional" drops the 1/rho2 factor; prior="flat" drops the prior term.
    """
    if prior == "conditional":
        prior_precision = 1.0 / (state.rho2 * state.tau2)
    elif prior == "unconditional":
        prior_precision = 1.0 / state.tau2
    else:
        prior_precision = np.zeros(data.p)
    return weighted_normal_draw(data, 1.0 / state.sigma2, prior_precision, rng)


def update_rho2(state: ChainState, data: Dataset, rng: RngStream, prior: Prior = "conditional") -> float:
    """rho2 ~ GIG(-n - p/2, eta sum 1/sigma2, eta sum sigma2 + beta' D_tau^-1 beta).
    Under the unconditional prior: GIG(-n, eta sum 1/sigma2, eta sum sigma2).
    """
    a = state.eta * np.sum(1.0 / state.sigma2)
    if prior == "conditional":
        nu = -data.n - 0.5 * data.p
        b = state.eta * np.sum(state.sigma2) + np.sum(state.beta ** 2 / state.tau2)
    else:
        nu = -float(data.n)
        b = state.eta * np.sum(state.sigma2)
    return sample_gig(GigParams.from_ab(nu, a, b), rng)


def update_tau2(state: ChainState, rng: RngStream, prior: Prior = "conditional") -> np.ndarray:
    """1/tau2_j ~ InvGauss(sqrt(lambda2 rho2 / beta_j^2), lambda2); rho2 omitted when unconditional."""
    beta2 = floor_beta2(state.beta)
    scale = state.rho2 if prior == "conditional" else 1.0
    mean = np.sqrt(state.lambda2 * scale / beta2)
    return 1.0 / sample_inv_gauss(mean, state.lambda2, rng, size=beta2.shape)


def update_sigma2(state: ChainState, data: Dataset, rng: RngStream) -> np.ndarray:
    """1/sigma2_i ~ InvGauss(sqrt(eta / (rho2 (r_i^2 + eta rho2))), eta / rho2)."""
    resid = data.y - data.x @ state.beta
    mean = np.sqrt(state.eta / (state.rho2 * (resid * resid + state.eta * state.rho2)))
    return 1.0 / sample_inv_gauss(mean, state.eta / state.rho2, rng, size=resid.shape)


def update_lambda2(state: ChainState, hyper: Hyperparams, rng: RngStream) -> float:
    """lambda2 ~ Ga(a + p, b + sum tau2 / 2)."""
    tau2 = np.asarray(state.tau2, dtype=float)
    return sample_gamma(hyper.a + tau2.size, hyper.b + 0.5 * tau2.sum(), rng)


def initial_state(data: Dataset, hyper: Hyperparams) -> ChainState:
    """Ridge start: beta = (X'X + I)^-1 X'y, unit local scales, rho2 = residual variance."""
    gram = data.x.T @ data.x + np.eye(data.p)
    beta = np.linalg.solve(gram, data.x.T @ data.y)
    resid = data.y - data.x @ beta
    rho2 = float(np.var(resid, ddof=1)) if data.n > 1 else 1.0
    return ChainState(
        beta=beta,
        tau2=np.ones(data.p),
        sigma2=np.ones(data.n),
        rho2=max(rho2, 1e-8),
        lambda2=hyper.lam ** 2,
        eta=hyper.eta,
    )
