"""Gamma approximation of the full conditional of eta.
The exact conditional is proportional to
    K_1(eta)^-n exp(-eta P) eta^(c-1) exp(-d eta),
    P = sum_i (sigma2_i / rho2 + rho2 / sigma2_i) / 2.
It is replaced by Ga(A, B), with (A, B) found by a fixed-point iteration that
matches the first two derivatives of the log density. At a fixed point
eta* = A/B solves  d/deta log f(eta) + 1/eta = 0.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Literal, Tuple

import numpy as np
from numpy.typing import ArrayLike

from hblasso.core.errors import DomainError
from hblasso.distributions.rng import RngStream
from hblasso.distributions.variates import sample_gamma
from hblasso.model.types import Hyperparams
from hblasso.special.bessel import dlog_k, k1_log_derivatives, log_bessel_k_scaled

logger = logging.getLogger(__name__)

ETA_FLOOR = 1e-8


@dataclass(frozen=True)
class GammaApprox:
    """Shape/rate of the gamma approximation and the iteration that produced it."""
    A: float
    B: float
    P: float
    n: int
    iterations_used: int
    converged: bool
    trace: List[Tuple[float, float]] = field(default_factory=list)

    @property
    def eta_star(self) -> float:
        return self.A / self.B


def compute_p(sigma2: ArrayLike, rho2: float) -> float:
    """P = (1/2) sum(sigma2_i / rho2 + rho2 / sigma2_i); P >= n with equality iff sigma2 == rho2."""
    sigma2 = np.asarray(sigma2, dtype=float)
    if np.any(sigma2 <= 0) or not rho2 > 0:
        raise DomainError("sigma2 and rho2 must be positive")
    ratio = sigma2 / rho2
    return float(0.5 * np.sum(ratio + 1.0 / ratio))


def fixed_point_residual(eta: ArrayLike, n: int, P: float, c: float, d: float):
    """d/deta log f(eta) + 1/eta; zero at the fixed point."""
    eta = np.asarray(eta, dtype=float)
    value = -n * np.asarray(dlog_k(1.0, eta)) + (c - 1.0) / eta - P - d + 1.0 / eta
    return float(value) if value.ndim == 0 else value


def solve_ab(n: int, P: float, c: float = 1.0, d: float = 1.0, max_iter: int = 10,
             tol: float = 1e-8, init: Literal["default", "alt"] = "default") -> GammaApprox:
    """Fixed-point iteration for the gamma approximation.
    Args:
        n (int): Number of observations
        P (float): Sufficient statistic from compute_p, P >= n
        c (float): Shape of the gamma prior on eta
        d (float): Rate of the gamma prior on eta
        max_iter (int): Maximum number of updates M
        tol (float): Stop when |eta / (A/B) - 1| < tol
        init (str): "default" starts at (c + n, d + P); "alt" at (c + n/2, d + P - n)
    Returns:
        GammaApprox: Final (A, B); converged is False when M updates did not meet tol
    """
    if n < 0 or not (c > 0 and d > 0):
        raise DomainError(f"need n >= 0 and c, d > 0, got n={n}, c={c}, d={d}")
    if P < n * (1.0 - 1e-12):
        raise DomainError(f"P ({P}) must be at least n ({n})")
    if init == "alt":
        A, B = c + 0.5 * n, d + max(P - n, 0.0)
    else:
        A, B = c + n, d + P
    trace = [(A, B)]
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        eta = max(A / B, ETA_FLOOR)
        first, second = k1_log_derivatives(eta)
        A = c + n * eta * eta * second
        B = d + (A - c) / eta + n * first + P
        trace.append((A, B))
        if abs(eta / (A / B) - 1.0) < tol:
            converged = True
            break
    if not converged:
        logger.debug("eta fixed point not reached after %d iterations (n=%d, P=%.6g)", max_iter, n, P)
    return GammaApprox(A=float(A), B=float(B), P=float(P), n=int(n), iterations_used=iterations,
                       converged=converged, trace=trace)


def true_eta_logpdf_unnorm(eta: ArrayLike, n: int, P: float, c: float, d: float):
    """-n log K_1(eta) - eta P + (c - 1) log eta - d eta."""
    eta_arr = np.asarray(eta, dtype=float)
    if np.any(~np.isfinite(eta_arr)) or np.any(eta_arr <= 0):
        raise DomainError("eta must be positive and finite")
    log_k = np.asarray(log_bessel_k_scaled(1.0, eta_arr)) - eta_arr
    value = -n * log_k - eta_arr * P + (c - 1.0) * np.log(eta_arr) - d * eta_arr
    return float(value) if value.ndim == 0 else value


def sample_eta(sigma2: np.ndarray, rho2: float, hyper: Hyperparams, rng: RngStream) -> Tuple[float, GammaApprox]:
    """Draw eta from the gamma approximation of its full conditional."""
    P = compute_p(sigma2, rho2)
    approx = solve_ab(len(sigma2), P, hyper.c, hyper.d, hyper.fp_max_iter, hyper.fp_tol, hyper.fp_init)
    eta = sample_gamma(approx.A, approx.B, rng)
    return max(eta, ETA_FLOOR), approx
