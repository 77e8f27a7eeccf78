"""Joint log posterior of (beta, rho2) with the local scales integrated out.
Up to an additive constant, under the conditional Laplace prior
    -((n + p) / 2) log rho2 - (lam / sqrt(rho2)) ||beta||_1
        - sum_i sqrt(eta (eta + (y_i - x_i' beta)^2 / rho2)).
In (phi, xi) = (beta / sqrt(rho2), 1 / sqrt(rho2)) the expression is concave.
"""
import numpy as np

from hblasso.core.errors import DomainError
from hblasso.model.types import Dataset


def _check(rho2: float, eta: float, lam: float):
    if not (np.isfinite(rho2) and rho2 > 0):
        raise DomainError(f"rho2 must be positive, got {rho2}")
    if not (eta > 0 and lam > 0):
        raise DomainError(f"eta and lambda must be positive, got eta={eta}, lambda={lam}")


def log_joint_posterior(beta: np.ndarray, rho2: float, data: Dataset, eta: float, lam: float) -> float:
    """Conditional-prior log posterior at (beta, rho2)."""
    _check(rho2, eta, lam)
    beta = np.asarray(beta, dtype=float)
    resid = data.y - data.x @ beta
    return float(-0.5 * (data.n + data.p) * np.log(rho2)
                 - lam / np.sqrt(rho2) * np.abs(beta).sum()
                 - np.sqrt(eta * (eta + resid * resid / rho2)).sum())


def log_joint_posterior_transformed(phi: np.ndarray, xi: float, data: Dataset,
                                    eta: float, lam: float) -> float:
    """The same log posterior in (phi, xi) coordinates."""
    if not xi > 0:
        raise DomainError(f"xi must be positive, got {xi}")
    phi = np.asarray(phi, dtype=float)
    resid = xi * data.y - data.x @ phi
    return float((data.n + data.p) * np.log(xi)
                 - lam * np.abs(phi).sum()
                 - np.sqrt(eta * (eta + resid * resid)).sum())


def log_joint_posterior_unconditional(beta: np.ndarray, rho2: float, data: Dataset,
                                      eta: float, lam: float) -> float:
    """Log posterior under the unconditional Laplace prior pi(beta) = prod (lam/2) e^{-lam |beta_j|}."""
    _check(rho2, eta, lam)
    beta = np.asarray(beta, dtype=float)
    resid = data.y - data.x @ beta
    return float(-0.5 * data.n * np.log(rho2)
                 - lam * np.abs(beta).sum()
                 - np.sqrt(eta * (eta + resid * resid / rho2)).sum())
