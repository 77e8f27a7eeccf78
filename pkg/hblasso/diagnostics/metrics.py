"""Estimation and prediction metrics."""
from typing import Dict, NamedTuple

import numpy as np
from numpy.typing import ArrayLike

from hblasso.core.errors import DomainError
from hblasso.model.losses import HUBER_C, huber
from hblasso.model.types import Dataset


class SimMetrics(NamedTuple):
    rmse: float
    al: float
    cp: float


def sim_metrics(point_estimates: ArrayLike, truth: ArrayLike, intervals: ArrayLike) -> SimMetrics:
    """RMSE of the point estimates, average interval length and coverage of the truth.
    Args:
        point_estimates: (p+1,) estimates of (beta_0, ..., beta_p)
        truth: (p+1,) true coefficients
        intervals: (p+1, 2) lower and upper interval bounds
    Returns:
        SimMetrics: (rmse, al, cp)
    """
    est = np.asarray(point_estimates, dtype=float).reshape(-1)
    true = np.asarray(truth, dtype=float).reshape(-1)
    bounds = np.asarray(intervals, dtype=float)
    if est.shape != true.shape or bounds.shape != (true.size, 2):
        raise DomainError(f"dimension mismatch: estimates {est.shape}, truth {true.shape}, "
                          f"intervals {bounds.shape}")
    rmse = np.sqrt(np.mean((est - true) ** 2))
    al = np.mean(bounds[:, 1] - bounds[:, 0])
    cp = np.mean((bounds[:, 0] <= true) & (true <= bounds[:, 1]))
    return SimMetrics(float(rmse), float(al), float(cp))


def prediction_errors(y: ArrayLike, predictions: ArrayLike) -> Dict[str, float]:
    """MSPE, MAPE, MHPE (Huber, c = 1.345) and MedSPE of y - predictions."""
    y = np.asarray(y, dtype=float).reshape(-1)
    pred = np.asarray(predictions, dtype=float).reshape(-1)
    if y.shape != pred.shape:
        raise DomainError(f"{pred.size} predictions for {y.size} observations")
    resid = y - pred
    squared = resid * resid
    return {
        "MSPE": float(np.mean(squared)),
        "MAPE": float(np.mean(np.abs(resid))),
        "MHPE": float(np.mean(huber(resid, HUBER_C))),
        "MedSPE": float(np.median(squared)),
    }


def loocv_metrics(data: Dataset, coefficients: ArrayLike) -> Dict[str, float]:
    """Leave-one-out prediction metrics.
    Args:
        data (Dataset): Full data
        coefficients: (n, p+1) array; row i holds (intercept, beta) fitted without observation i
    Returns:
        dict: MSPE, MAPE, MHPE, MedSPE
    Raises:
        DomainError: If a fold is missing or failed (NaN row)
    """
    coef = np.asarray(coefficients, dtype=float)
    if coef.shape != (data.n, data.p + 1):
        raise DomainError(f"need one (p+1)-vector per observation, got shape {coef.shape} "
                          f"for n={data.n}, p={data.p}")
    missing = np.flatnonzero(~np.all(np.isfinite(coef), axis=1))
    if missing.size:
        raise DomainError(f"missing fold(s) for observation(s) {(missing + 1).tolist()}")
    predictions = coef[:, 0] + np.einsum("ij,ij->i", data.x, coef[:, 1:])
    return prediction_errors(data.y, predictions)
