"""Sensitivity of the HBL fit to the gamma hyperparameters a, b (lambda2) and c, d (eta).
Data: 50 equally spaced points on [-2, 2], four logistic features, beta = (1, 1, 1, 1)
and hyperbolic noise scaled by sigma.
"""
import logging
from dataclasses import dataclass
from functools import partial
from typing import Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.special import expit

from hblasso.core.config import FitConfig
from hblasso.core.errors import DomainError
from hblasso.core.parallel import parallel_map
from hblasso.distributions.rng import RngStream
from hblasso.distributions.variates import sample_hyperbolic
from hblasso.model.types import Dataset, Hyperparams
from hblasso.samplers import run_chain

logger = logging.getLogger(__name__)

HYPERPARAMETERS = ("a", "b", "c", "d")
TRUE_BETA = np.ones(4)


def logistic_features(x: np.ndarray) -> np.ndarray:
    """(1 + e^{-4(x-0.3)})^-1, (1 + e^{3(x-0.2)})^-1, (1 + e^{-4(x-0.7)})^-1, (1 + e^{5(x-0.8)})^-1."""
    x = np.asarray(x, dtype=float)
    return np.column_stack([
        expit(4.0 * (x - 0.3)),
        expit(-3.0 * (x - 0.2)),
        expit(4.0 * (x - 0.7)),
        expit(-5.0 * (x - 0.8)),
    ])


def sensitivity_data(n_points: int = 50, sigma: float = 0.03, seed: int = 0) -> Tuple[np.ndarray, Dataset]:
    """Grid x and the simulated dataset y = X beta + sigma e, e ~ Hyp(eta=1, rho2=1)."""
    grid = np.linspace(-2.0, 2.0, n_points)
    x = logistic_features(grid)
    noise = sample_hyperbolic(1.0, 1.0, RngStream(seed, 0), size=n_points)
    return grid, Dataset(y=x @ TRUE_BETA + sigma * noise, x=x)


@dataclass
class SensitivityResult:
    """Fitted curves (one per setting) and the true curve."""
    curves: pd.DataFrame
    truth: pd.DataFrame


def _fit_setting(task, data: Dataset, grid: np.ndarray, config: FitConfig):
    index, (parameter, value) = task
    hyper = config.hyper.model_copy(update={parameter: float(value)})
    samples = run_chain(data, config.updated(hyper=hyper, sampler_kind="hbl", stream=index + 1))
    coef = samples.coefficients().mean(axis=0)
    fitted = coef[0] + data.x @ coef[1:]
    return pd.DataFrame({"parameter": parameter, "value": float(value), "i": np.arange(1, data.n + 1),
                         "x": grid, "y_hat": fitted})


def run_sensitivity(parameters: Sequence[str] = HYPERPARAMETERS, values: Sequence[float] = (0.1, 1.0, 10.0),
                    n_points: int = 50, sigma: float = 0.03, iterations: int = 4000, burn_in: int = 1000,
                    seed: int = 0, num_workers: int = 1) -> SensitivityResult:
    """Fit HBL once per (parameter, value) with the other hyperparameters at 1.
    The fitted curve is y_hat_i = intercept + x_i' beta at the posterior mean.
    """
    unknown = [name for name in parameters if name not in HYPERPARAMETERS]
    if unknown:
        raise DomainError(f"Unknown hyperparameters: {unknown}. Available: {list(HYPERPARAMETERS)}")
    grid, data = sensitivity_data(n_points, sigma, seed)
    config = FitConfig(iterations=iterations, burn_in=burn_in, hyper=Hyperparams(), seed=seed)
    settings = [(name, value) for name in parameters for value in values]
    worker = partial(_fit_setting, data=data, grid=grid, config=config)
    curves = parallel_map(worker, list(enumerate(settings)), num_workers, desc="sensitivity")
    truth = pd.DataFrame({"i": np.arange(1, n_points + 1), "x": grid, "truth": data.x @ TRUE_BETA, "y": data.y})
    logger.info("Sensitivity fits done for %d settings", len(settings))
    return SensitivityResult(curves=pd.concat(curves, ignore_index=True), truth=truth)
