"""Baseline samplers: Bayesian lasso (BL), Student-t lasso (tBL) and
Bayesian quantile-regression lasso (mBL, median by default).

BL     y ~ N(X beta, sigma2 I), beta_j ~ N(0, sigma2 tau2_j), tau2_j ~ Exp(lambda2/2), sigma2 ~ 1/sigma2
tBL    y_i ~ N(x_i' beta, sigma2 omega_i), omega_i ~ IG(nu/2, nu/2); otherwise as BL
mBL    y_i = x_i' beta + theta v_i + psi sqrt(sigma v_i) z_i, v_i ~ Exp(mean sigma),
       beta_j ~ N(0, tau2_j), sigma ~ 1/sigma
with theta = (1 - 2q) / (q (1 - q)), psi^2 = 2 / (q (1 - q)) for quantile level q.
"""
from dataclasses import dataclass, replace
from typing import List

import numpy as np

from hblasso.distributions.rng import RngStream
from hblasso.distributions.variates import sample_gamma, sample_inv_gamma, sample_inv_gauss
from hblasso.model.types import Dataset
from hblasso.samplers.base import BaseSampler, labelled
from hblasso.samplers.updates import floor_beta2, weighted_normal_draw

#: lower bound on the scaled squared residual in the mBL latent update
RESIDUAL2_FLOOR = 1e-300


@dataclass(frozen=True)
class BaselineState:
    """beta, local scales tau2, global scale sigma2, per-observation latent, lambda2."""
    beta: np.ndarray
    tau2: np.ndarray
    sigma2: float
    latent: np.ndarray
    lambda2: float


class _LassoBaseline(BaseSampler):
    latent_name = "latent"

    def initial_state(self, data: Dataset) -> BaselineState:
        gram = data.x.T @ data.x + np.eye(data.p)
        beta = np.linalg.solve(gram, data.x.T @ data.y)
        resid = data.y - data.x @ beta
        sigma2 = float(np.var(resid, ddof=1)) if data.n > 1 else 1.0
        return BaselineState(beta=beta, tau2=np.ones(data.p), sigma2=max(sigma2, 1e-8),
                             latent=np.ones(data.n), lambda2=self.config.hyper.lam ** 2)

    def _lambda2(self, state: BaselineState, rng: RngStream) -> float:
        hyper = self.config.hyper
        if hyper.lambda_mode == "fixed":
            return hyper.lam ** 2
        with labelled("lambda2"):
            return sample_gamma(hyper.a + state.tau2.size, hyper.b + 0.5 * state.tau2.sum(), rng)

    def state_names(self, data: Dataset) -> List[str]:
        names = [f"beta_{j + 1}" for j in range(data.p)] + ["sigma2", "lambda2"]
        if self.config.store_full_state:
            names += [f"tau2_{j + 1}" for j in range(data.p)]
            names += [f"{self.latent_name}_{i + 1}" for i in range(data.n)]
        return names

    def record(self, state: BaselineState) -> np.ndarray:
        parts = [state.beta, [state.sigma2, state.lambda2]]
        if self.config.store_full_state:
            parts += [state.tau2, state.latent]
        return np.concatenate([np.asarray(part, dtype=float) for part in parts])


class BLSampler(_LassoBaseline):
    """Bayesian lasso Gibbs sampler with scale-dependent Laplace prior."""
    @property
    def name(self) -> str:
        return "BL"

    def _weights(self, state: BaselineState) -> np.ndarray:
        return np.ones_like(state.latent)

    def _update_latent(self, state: BaselineState, data: Dataset, rng: RngStream) -> np.ndarray:
        return state.latent

    def step(self, state: BaselineState, data: Dataset, rng: RngStream) -> BaselineState:
        n, p = data.n, data.p
        weights = self._weights(state)
        with labelled("beta"):
            # N(A^-1 X'Wy, sigma2 A^-1): scale the precision by 1/sigma2
            beta = weighted_normal_draw(data, weights / state.sigma2, 1.0 / (state.sigma2 * state.tau2), rng)
        resid = data.y - data.x @ beta
        with labelled("sigma2"):
            # y is centered, which removes one degree of freedom
            shape = 0.5 * (n - 1 + p)
            scale = 0.5 * (np.sum(weights * resid * resid) + np.sum(beta ** 2 / state.tau2))
            sigma2 = sample_inv_gamma(shape, scale, rng)
        with labelled("tau2"):
            mean = np.sqrt(state.lambda2 * sigma2 / floor_beta2(beta))
            tau2 = 1.0 / sample_inv_gauss(mean, state.lambda2, rng, size=p)
        state = replace(state, beta=beta, sigma2=sigma2, tau2=tau2)
        with labelled("latent"):
            state = replace(state, latent=self._update_latent(state, data, rng))
        return replace(state, lambda2=self._lambda2(state, rng))


class TBLSampler(BLSampler):
    """Bayesian lasso with Student-t errors via inverse-gamma variance inflation."""
    latent_name = "omega"

    @property
    def name(self) -> str:
        return "tBL"

    def _weights(self, state: BaselineState) -> np.ndarray:
        return 1.0 / state.latent

    def _update_latent(self, state: BaselineState, data: Dataset, rng: RngStream) -> np.ndarray:
        """omega_i ~ IG((nu + 1)/2, (nu + r_i^2 / sigma2) / 2)."""
        df = self.config.t_df
        resid = data.y - data.x @ state.beta
        return sample_inv_gamma(0.5 * (df + 1.0), 0.5 * (df + resid * resid / state.sigma2), rng, size=data.n)


class MBLSampler(_LassoBaseline):
    """Bayesian lasso quantile regression through the asymmetric-Laplace mixture."""
    latent_name = "v"

    @property
    def name(self) -> str:
        return "mBL"

    @property
    def theta_psi2(self):
        q = self.config.quantile
        return (1.0 - 2.0 * q) / (q * (1.0 - q)), 2.0 / (q * (1.0 - q))

    def step(self, state: BaselineState, data: Dataset, rng: RngStream) -> BaselineState:
        theta, psi2 = self.theta_psi2
        n, p = data.n, data.p
        sigma, v = state.sigma2, state.latent
        with labelled("beta"):
            weights = 1.0 / (psi2 * sigma * v)
            beta = weighted_normal_draw(data, weights, 1.0 / state.tau2, rng, target=data.y - theta * v)
        resid = data.y - data.x @ beta
        with labelled("latent"):
            # 1/v_i ~ InvGauss(sqrt(gamma2 / delta2_i), gamma2)
            gamma2 = theta * theta / (psi2 * sigma) + 2.0 / sigma
            delta2 = np.maximum(resid * resid / (psi2 * sigma), RESIDUAL2_FLOOR)
            v = 1.0 / sample_inv_gauss(np.sqrt(gamma2 / delta2), gamma2, rng, size=n)
        with labelled("sigma2"):
            misfit = resid - theta * v
            scale = np.sum(misfit * misfit / (2.0 * psi2 * v)) + np.sum(v)
            sigma = sample_inv_gamma(1.5 * n, scale, rng)
        with labelled("tau2"):
            mean = np.sqrt(state.lambda2 / floor_beta2(beta))
            tau2 = 1.0 / sample_inv_gauss(mean, state.lambda2, rng, size=p)
        state = replace(state, beta=beta, latent=v, sigma2=sigma, tau2=tau2)
        return replace(state, lambda2=self._lambda2(state, rng))
