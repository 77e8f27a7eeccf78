"""Importance-sampling estimates of the distance between the true eta
conditional f and its gamma approximation g.

The proposal q is Ga(A/2, B/2): the mean of g with twice its variance, so the
weights f/q and g/q stay bounded in both tails. The normalizing constant of f
is estimated from the same draws.
"""
import logging
from functools import partial
from typing import Dict, Literal, Sequence

import numpy as np
import pandas as pd
from scipy import stats
from scipy.integrate import trapezoid
from scipy.special import logsumexp, softmax

from hblasso.core.errors import DomainError
from hblasso.core.parallel import parallel_map
from hblasso.distributions.rng import GigParams, RngStream
from hblasso.distributions.variates import sample_gamma, sample_gig
from hblasso.eta.approx import GammaApprox, compute_p, solve_ab, true_eta_logpdf_unnorm

logger = logging.getLogger(__name__)

Measure = Literal["TV", "KL", "revKL"]
MEASURES = ("TV", "KL", "revKL")

#: warn when the importance-weight ESS falls below this share of the draws
MIN_ESS_FRACTION = 0.05


def _clamp(measure: str, value: float, upper: float, context: str = "") -> float:
    """Monte Carlo estimate pulled back into [0, upper]."""
    clamped = float(min(max(value, 0.0), upper))
    if clamped != value:
        logger.debug("Clamped %s estimate %.3g to %.3g (%s)", measure, value, clamped, context)
    return clamped


def divergences(approx: GammaApprox, c: float, d: float, mc_size: int, rng: RngStream) -> Dict[str, float]:
    """TV, KL(f||g) and KL(g||f) between the true conditional and its approximation.
    Args:
        approx (GammaApprox): Output of solve_ab for (n, P, c, d)
        c (float): Shape of the eta prior
        d (float): Rate of the eta prior
        mc_size (int): Number of proposal draws
        rng (RngStream): Random stream
    Returns:
        dict: {"TV", "KL", "revKL", "ess"}; TV in [0, 1], both KLs >= 0
    """
    if mc_size < 2:
        raise DomainError(f"mc_size must be at least 2, got {mc_size}")
    shape, rate = 0.5 * approx.A, 0.5 * approx.B
    eta = np.maximum(sample_gamma(shape, rate, rng, size=mc_size), np.finfo(float).tiny)

    log_q = stats.gamma.logpdf(eta, shape, scale=1.0 / rate)
    log_g = stats.gamma.logpdf(eta, approx.A, scale=1.0 / approx.B)
    log_f_kernel = true_eta_logpdf_unnorm(eta, approx.n, approx.P, c, d)

    log_w = log_f_kernel - log_q
    log_z = logsumexp(log_w) - np.log(mc_size)
    log_f = log_f_kernel - log_z

    f_over_q = np.exp(log_f - log_q)
    g_over_q = np.exp(log_g - log_q)
    weights = softmax(log_w)
    ess = float(1.0 / np.sum(weights * weights))
    if ess < MIN_ESS_FRACTION * mc_size:
        logger.warning("Importance-weight ESS %.0f is below %.0f%% of %d draws (n=%d, P=%.6g)",
                       ess, 100 * MIN_ESS_FRACTION, mc_size, approx.n, approx.P)

    tv = 0.5 * np.mean(np.abs(f_over_q - g_over_q))
    kl = np.sum(weights * (log_f - log_g))
    rev_kl = np.mean(g_over_q * (log_g - log_f))
    context = f"n={approx.n}, P={approx.P:.6g}, mc_size={mc_size}"
    return {
        "TV": _clamp("TV", tv, 1.0, context),
        "KL": _clamp("KL", kl, np.inf, context),
        "revKL": _clamp("revKL", rev_kl, np.inf, context),
        "ess": ess,
    }


def discrepancy(sample: np.ndarray, c: float, d: float, measure: Measure = "TV",
                mc_size: int = 10000, rng: RngStream = None, rho2: float = 1.0,
                max_iter: int = 10, tol: float = 1e-8) -> float:
    """Divergence between the eta conditional implied by `sample` (as sigma2) and its approximation."""
    if measure not in MEASURES:
        raise ValueError(f"Unknown measure: {measure}. Available measures: {list(MEASURES)}")
    rng = rng if rng is not None else RngStream()
    sample = np.asarray(sample, dtype=float)
    approx = solve_ab(sample.size, compute_p(sample, rho2), c, d, max_iter, tol)
    return divergences(approx, c, d, mc_size, rng)[measure]


def _study_task(task, n_grid: Sequence[int], ab_grid: Sequence[float], mc_size: int, seed: int):
    """All (n, a=b) settings for one dataset index; the data are nested across n."""
    index = task
    data_rng = RngStream(seed, 2 * index)
    draws = sample_gig(GigParams(1.0, 1.0, 1.0), data_rng, size=max(n_grid))
    rows = []
    for n in n_grid:
        sample = draws[:n]
        P = compute_p(sample, 1.0)
        for ab in ab_grid:
            approx = solve_ab(n, P, ab, ab)
            result = divergences(approx, ab, ab, mc_size, RngStream(seed, 2 * index + 1))
            rows.append({"n": n, "ab": ab, "dataset": index, **result})
    return rows


def approximation_study(n_grid: Sequence[int] = (10, 50, 100, 200), ab_grid: Sequence[float] = (0.01, 0.1, 1.0),
                        datasets: int = 100, mc_size: int = 10000, seed: int = 0,
                        num_workers: int = 1, progress: bool = False) -> pd.DataFrame:
    """Accuracy of the gamma approximation over simulated GIG(1, 1, 1) data.
    Returns:
        pd.DataFrame: Columns n, ab, measure, max, mean (over datasets)
    """
    if datasets < 1:
        raise DomainError(f"datasets must be positive, got {datasets}")
    worker = partial(_study_task, n_grid=list(n_grid), ab_grid=list(ab_grid), mc_size=mc_size, seed=seed)
    results = parallel_map(worker, range(datasets), num_workers, desc="approximation", progress=progress)
    raw = pd.DataFrame([row for rows in results for row in rows])
    long = raw.melt(id_vars=["n", "ab", "dataset"], value_vars=list(MEASURES), var_name="measure")
    table = long.groupby(["n", "ab", "measure"], sort=True)["value"].agg(["max", "mean"]).reset_index()
    return table


def eta_density_table(n: int, P: float, c: float, d: float, grid: Sequence[float]) -> pd.DataFrame:
    """True conditional (normalized on the grid) and gamma approximation of eta.
    Returns:
        pd.DataFrame: Columns eta, true, approx
    """
    eta = np.asarray(grid, dtype=float)
    if eta.ndim != 1 or eta.size < 2 or np.any(np.diff(eta) <= 0):
        raise DomainError("grid must be an increasing 1-D array with at least two points")
    log_f = true_eta_logpdf_unnorm(eta, n, P, c, d)
    density = np.exp(log_f - np.max(log_f))
    density /= trapezoid(density, eta)
    approx = solve_ab(n, P, c, d)
    return pd.DataFrame({
        "eta": eta,
        "true": density,
        "approx": stats.gamma.pdf(eta, approx.A, scale=1.0 / approx.B),
    })
