"""Bayesian influence functions of posterior means under the hyperbolic likelihood.

For the simple regression y = beta_0 + beta_1 x + e with flat priors,
    IF_k(z | x) = n Cov(beta_k, H(theta, z | x)),
    H(theta, z | x) = log f(y* | x; theta) - E_g[log f(t | x; theta)],
where f is the hyperbolic density (rho2 = 1) around beta_0 + beta_1 x, g is the
N(x, 1) sampling density of the data-generating line beta = (0, 1) and the
perturbing observation y* = x + z sits z away from that line.
"""
import logging
from dataclasses import dataclass
from functools import partial
from typing import List, Sequence

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike

from hblasso.core.config import FitConfig
from hblasso.core.errors import DomainError, InsufficientSamplesError
from hblasso.core.parallel import parallel_map
from hblasso.distributions.rng import RngStream
from hblasso.model.losses import hyperbolic_logpdf
from hblasso.model.types import ChainState, Dataset, Hyperparams, PosteriorSamples
from hblasso.samplers.base import BaseSampler, labelled
from hblasso.samplers.updates import update_beta, update_sigma2

logger = logging.getLogger(__name__)

MIN_POSTERIOR_DRAWS = 10000
MIN_G_DRAWS = 2000
#: posterior draws per block when averaging over the g sample
_CHUNK = 1000


class FlatPriorHLMSampler(BaseSampler):
    """Gibbs sampler of the hyperbolic linear model with a flat prior on all coefficients.
    The design carries its own intercept column; rho2 stays at 1 and eta is fixed.
    """
    center = False

    @property
    def name(self) -> str:
        return "HLM_flat_prior"

    def initial_state(self, data: Dataset) -> ChainState:
        beta = np.linalg.lstsq(data.x, data.y, rcond=None)[0]
        return ChainState(beta=beta, tau2=np.ones(data.p), sigma2=np.ones(data.n), rho2=1.0,
                          lambda2=1.0, eta=self.config.hyper.eta)

    def step(self, state: ChainState, data: Dataset, rng: RngStream) -> ChainState:
        with labelled("beta"):
            state = state.evolve(beta=update_beta(state, data, rng, prior="flat"))
        with labelled("sigma2"):
            return state.evolve(sigma2=update_sigma2(state, data, rng))

    def state_names(self, data: Dataset) -> List[str]:
        return ["intercept"] + [f"beta_{j}" for j in range(1, data.p)]

    def record(self, state: ChainState) -> np.ndarray:
        return np.asarray(state.beta, dtype=float)


def fit_flat_prior_hlm(data: Dataset, eta: float, draws: int = 10000, burn_in: int = 1000,
                       seed: int = 0, stream: int = 0) -> PosteriorSamples:
    """Posterior draws of (beta_0, beta_1) for a simple regression under the hyperbolic likelihood.
    Args:
        data (Dataset): Simple-regression data (one covariate)
        eta (float): Fixed robustness parameter
        draws (int): Stored draws
        burn_in (int): Discarded iterations
        seed (int): Master seed
        stream (int): Stream id
    Returns:
        PosteriorSamples: Columns intercept, beta_1
    """
    if data.p != 1:
        raise DomainError(f"flat-prior HLM takes one covariate, got p={data.p}")
    design = Dataset(y=data.y, x=np.column_stack([np.ones(data.n), data.x[:, 0]]),
                     feature_names=("intercept", data.names[0]), response_name=data.response_name)
    hyper = Hyperparams(eta_mode="fixed", eta=eta, lambda_mode="fixed")
    config = FitConfig(iterations=burn_in + draws, burn_in=burn_in, hyper=hyper, seed=seed, stream=stream)
    return FlatPriorHLMSampler(config).run(design)


def _expected_logpdf(centers: np.ndarray, g_samples: np.ndarray, eta: float) -> np.ndarray:
    """E_g[log f(t | x; theta)] for every posterior draw, in blocks of draws."""
    out = np.empty(centers.size)
    for start in range(0, centers.size, _CHUNK):
        block = centers[start:start + _CHUNK]
        out[start:start + _CHUNK] = hyperbolic_logpdf(g_samples[None, :] - block[:, None], eta, 1.0).mean(axis=1)
    return out


def _influence(posterior: np.ndarray, z: np.ndarray, x: float, eta: float,
               g_samples: np.ndarray, n: int) -> np.ndarray:
    """IF_0 and IF_1 at every z; returns an array of shape (2, len(z))."""
    centers = posterior[:, 0] + posterior[:, 1] * x
    baseline = _expected_logpdf(centers, g_samples, eta)
    h = hyperbolic_logpdf((x + z)[None, :] - centers[:, None], eta, 1.0) - baseline[:, None]
    h_centered = h - h.mean(axis=0)
    beta_centered = posterior - posterior.mean(axis=0)
    cov = beta_centered.T @ h_centered / (posterior.shape[0] - 1)
    return n * cov


def _check_draws(posterior: np.ndarray, g_samples: np.ndarray, min_draws: int, min_g_draws: int):
    if posterior.ndim != 2 or posterior.shape[1] != 2:
        raise DomainError(f"posterior must hold (beta_0, beta_1) draws, got shape {posterior.shape}")
    if posterior.shape[0] < max(min_draws, 2):
        raise InsufficientSamplesError(f"need at least {min_draws} posterior draws, got {posterior.shape[0]}")
    if g_samples.size < max(min_g_draws, 1):
        raise InsufficientSamplesError(f"need at least {min_g_draws} g draws, got {g_samples.size}")


def influence_function(k: int, z: ArrayLike, x: float, posterior: ArrayLike, eta: float,
                       g_samples: ArrayLike, n: int = 100, min_draws: int = MIN_POSTERIOR_DRAWS,
                       min_g_draws: int = MIN_G_DRAWS):
    """IF_k(z | x) for k in {0, 1}.
    Args:
        k (int): 0 for the intercept, 1 for the slope
        z: Perturbation(s) of the observation at x
        x (float): Covariate value of the perturbing observation
        posterior: (S, 2) draws of (beta_0, beta_1)
        eta (float): Robustness parameter of the likelihood
        g_samples: Draws from g(. | x) = N(x, 1)
        n (int): Sample size of the fitted data
    Returns:
        float or ndarray: Influence at each z
    """
    if k not in (0, 1):
        raise DomainError(f"k must be 0 or 1, got {k}")
    posterior = np.asarray(posterior, dtype=float)
    g_samples = np.asarray(g_samples, dtype=float).reshape(-1)
    _check_draws(posterior, g_samples, min_draws, min_g_draws)
    z_arr = np.atleast_1d(np.asarray(z, dtype=float))
    value = _influence(posterior, z_arr, float(x), eta, g_samples, n)[k]
    return float(value[0]) if np.ndim(z) == 0 else value


@dataclass(frozen=True)
class InfluenceGrid:
    """IF_0 and IF_1 indexed by (eta, x, z)."""
    x_values: np.ndarray
    z_values: np.ndarray
    eta_settings: np.ndarray
    if0: np.ndarray
    if1: np.ndarray

    def __post_init__(self):
        shape = (len(self.eta_settings), len(self.x_values), len(self.z_values))
        for name in ("if0", "if1"):
            values = getattr(self, name)
            if values.shape != shape:
                raise DomainError(f"{name} has shape {values.shape}, expected {shape}")
            if not np.all(np.isfinite(values)):
                raise DomainError(f"{name} contains non-finite values")

    def to_frame(self) -> pd.DataFrame:
        """Long format with columns x, z, eta, IF0, IF1."""
        eta, x, z = np.meshgrid(self.eta_settings, self.x_values, self.z_values, indexing="ij")
        return pd.DataFrame({"x": x.ravel(), "z": z.ravel(), "eta": eta.ravel(),
                             "IF0": self.if0.ravel(), "IF1": self.if1.ravel()})


def simulate_simple_regression(n: int, rng: RngStream) -> Dataset:
    """y = x + e with x, e standard normal."""
    x = rng.normal(n)
    y = x + rng.normal(n)
    return Dataset(y=y, x=x.reshape(-1, 1), feature_names=("x",))


def _grid_task(index_eta, data: Dataset, x_values, z_values, g_base, draws, burn_in, seed,
               min_draws, min_g_draws):
    index, eta = index_eta
    samples = fit_flat_prior_hlm(data, eta, draws=draws, burn_in=burn_in, seed=seed, stream=index + 1)
    posterior = samples.coefficients()
    _check_draws(posterior, g_base, min_draws, min_g_draws)
    out = np.empty((2, len(x_values), len(z_values)))
    for i, x in enumerate(x_values):
        out[:, i, :] = _influence(posterior, z_values, x, eta, x + g_base, data.n)
    logger.info("Influence functions done for eta=%g", eta)
    return out


def influence_grid(x_values: Sequence[float] = (-0.5, 1.0), z_values: Sequence[float] = None,
                   eta_settings: Sequence[float] = (0.2, 0.5, 1.0), n: int = 100, draws: int = 10000,
                   burn_in: int = 1000, g_draws: int = 2000, seed: int = 0, num_workers: int = 1,
                   min_draws: int = MIN_POSTERIOR_DRAWS, min_g_draws: int = MIN_G_DRAWS) -> InfluenceGrid:
    """Fit the flat-prior HLM once per eta on one simulated dataset and evaluate IF_0, IF_1.
    z_values defaults to 81 points on [-10, 10].
    """
    z = np.linspace(-10.0, 10.0, 81) if z_values is None else np.asarray(z_values, dtype=float)
    xs = np.asarray(x_values, dtype=float)
    etas = np.asarray(eta_settings, dtype=float)
    data = simulate_simple_regression(n, RngStream(seed, 0))
    g_base = RngStream(seed, len(etas) + 1).normal(g_draws)
    worker = partial(_grid_task, data=data, x_values=xs, z_values=z, g_base=g_base, draws=draws,
                     burn_in=burn_in, seed=seed, min_draws=min_draws, min_g_draws=min_g_draws)
    results = parallel_map(worker, list(enumerate(etas)), num_workers, desc="influence")
    stacked = np.stack(results)
    return InfluenceGrid(x_values=xs, z_values=z, eta_settings=etas, if0=stacked[:, 0], if1=stacked[:, 1])
