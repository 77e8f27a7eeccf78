"""Posterior summaries and chain-quality diagnostics."""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike
from scipy.fft import irfft, next_fast_len, rfft

from hblasso.core.errors import InsufficientSamplesError
from hblasso.model.types import PosteriorSamples

logger = logging.getLogger(__name__)

MIN_SUMMARY_DRAWS = 10
MIN_ESS_DRAWS = 50
#: equal-tailed 95% interval
INTERVAL = (0.025, 0.975)


def _series(series: ArrayLike, minimum: int) -> np.ndarray:
    x = np.asarray(series, dtype=float).reshape(-1)
    if x.size < minimum:
        raise InsufficientSamplesError(f"need at least {minimum} draws, got {x.size}")
    return x


def acf(series: ArrayLike, max_lag: Optional[int] = None) -> np.ndarray:
    """Sample autocorrelations at lags 0..max_lag (FFT, zero-padded to avoid wrap-around)."""
    x = _series(series, 2)
    n = x.size
    max_lag = n - 1 if max_lag is None else min(int(max_lag), n - 1)
    if np.ptp(x) == 0:
        # constant series
        out = np.zeros(max_lag + 1)
        out[0] = 1.0
        return out
    centered = x - x.mean()
    size = next_fast_len(2 * n)
    acov = irfft(np.abs(rfft(centered, size)) ** 2, size)[:max_lag + 1]
    return acov / acov[0]


def _ess(x: np.ndarray) -> float:
    n = x.size
    rho = acf(x)
    if rho.size % 2:
        rho = np.append(rho, 0.0)
    pairs = rho[0::2] + rho[1::2]
    stop = np.flatnonzero(pairs <= 0)
    kept = pairs[:stop[0]] if stop.size else pairs
    tau = 2.0 * kept.sum() - 1.0
    # capped at S
    return float(min(n, n / max(tau, 1e-12)))


def ess(series: ArrayLike) -> float:
    """Effective sample size with the initial positive sequence truncation.
    Lag pairs rho_{2k} + rho_{2k+1} are summed until the first non-positive pair.
    """
    return _ess(_series(series, MIN_ESS_DRAWS))


def inefficiency_factor(series: ArrayLike) -> float:
    """S / ESS; 1 for independent draws."""
    x = _series(series, MIN_ESS_DRAWS)
    return float(x.size / ess(x))


def average_ess(samples: PosteriorSamples, prefix: str = "beta") -> float:
    """Mean ESS over the columns <prefix>_1, <prefix>_2, ..."""
    block = samples.block(prefix)
    if block.shape[1] == 0:
        raise KeyError(f"No parameters with prefix '{prefix}'")
    return float(np.mean([ess(block[:, j]) for j in range(block.shape[1])]))


@dataclass(frozen=True)
class Summary:
    """Per-parameter posterior median, mean, 95% interval, ESS and optionally SD."""
    names: List[str]
    median: np.ndarray
    mean: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    ess: np.ndarray
    sd: Optional[np.ndarray] = None

    def to_frame(self) -> pd.DataFrame:
        columns = {"parameter": self.names, "median": self.median, "mean": self.mean,
                   "lower": self.lower, "upper": self.upper, "ess": self.ess}
        if self.sd is not None:
            columns["sd"] = self.sd
        return pd.DataFrame(columns)

    def row(self, name: str) -> Dict[str, float]:
        try:
            i = self.names.index(name)
        except ValueError:
            raise KeyError(f"Unknown parameter '{name}'. Available: {self.names}") from None
        out = {"median": self.median[i], "mean": self.mean[i], "lower": self.lower[i],
               "upper": self.upper[i], "ess": self.ess[i]}
        if self.sd is not None:
            out["sd"] = self.sd[i]
        return {key: float(value) for key, value in out.items()}


def summarize(samples: PosteriorSamples, include_sd: bool = False) -> Summary:
    """Quantile-based summary of every column.
    Args:
        samples (PosteriorSamples): Posterior draws
        include_sd (bool): Also report the posterior standard deviation
    Returns:
        Summary: Medians, means, 2.5%/97.5% quantiles (linear interpolation) and ESS;
            ESS lies in (0, S] and is noisy below MIN_ESS_DRAWS draws
    Raises:
        InsufficientSamplesError: If fewer than 10 draws are available
    """
    draws = samples.draws
    if samples.size < MIN_SUMMARY_DRAWS:
        raise InsufficientSamplesError(f"need at least {MIN_SUMMARY_DRAWS} draws to summarize, got {samples.size}")
    lower, median, upper = np.quantile(draws, [INTERVAL[0], 0.5, INTERVAL[1]], axis=0)
    if samples.size < MIN_ESS_DRAWS:
        logger.warning("ESS from only %d draws is unreliable", samples.size)
    ess_values = np.array([_ess(draws[:, j]) for j in range(draws.shape[1])])
    return Summary(
        names=list(samples.names),
        median=median,
        mean=draws.mean(axis=0),
        lower=lower,
        upper=upper,
        ess=ess_values,
        sd=draws.std(axis=0, ddof=1) if include_sd else None,
    )
