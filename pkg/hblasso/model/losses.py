"""Loss functions and the hyperbolic density."""
from typing import Dict, Sequence

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike

from hblasso.core.errors import DomainError
from hblasso.special.bessel import log_bessel_k

#: Huber threshold with about 95% asymptotic efficiency under normal errors
HUBER_C = 1.345
#: pseudo-Huber threshold with matching efficiency
PSEUDO_HUBER_C = 1.549


def _check_positive(**params):
    for name, value in params.items():
        if not (np.isfinite(value) and value > 0):
            raise DomainError(f"{name} must be positive, got {value}")


def _out(value, x):
    return float(value) if np.ndim(x) == 0 else value


def hyperbolic_loss(x: ArrayLike, eta: float, rho2: float):
    """sqrt(eta (eta + x^2 / rho2)) - eta, written to avoid cancellation at large eta."""
    _check_positive(eta=eta, rho2=rho2)
    x = np.asarray(x, dtype=float)
    u = x * x / rho2
    # sqrt(eta^2 + eta u) - eta == eta u / (sqrt(eta^2 + eta u) + eta)
    value = eta * u / (np.sqrt(eta * (eta + u)) + eta)
    return _out(value, x)


def pseudo_huber(x: ArrayLike, c: float):
    """c sqrt(c^2 + x^2) - c^2."""
    _check_positive(c=c)
    x = np.asarray(x, dtype=float)
    value = c * x * x / (np.sqrt(c * c + x * x) + c)
    return _out(value, x)


def huber(x: ArrayLike, c: float = HUBER_C):
    """x^2 / 2 for |x| <= c, c (|x| - c / 2) otherwise."""
    _check_positive(c=c)
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    value = np.where(ax <= c, 0.5 * x * x, c * (ax - 0.5 * c))
    return _out(value, x)


def hyperbolic_logpdf(x: ArrayLike, eta: float, rho2: float):
    """Log density of the zero-location hyperbolic distribution.
    f(x) = exp(-sqrt(eta (eta + x^2 / rho2))) / (2 sqrt(eta rho2) K_1(eta)).
    """
    _check_positive(eta=eta, rho2=rho2)
    x = np.asarray(x, dtype=float)
    log_norm = np.log(2.0) + 0.5 * np.log(eta * rho2) + log_bessel_k(1.0, eta)
    value = -np.sqrt(eta * (eta + x * x / rho2)) - log_norm
    return _out(value, x)


def loss_table(x_grid: Sequence[float], eta_values: Sequence[float] = (0.1, 1.0, 10.0),
               rho2: float = 1.0) -> pd.DataFrame:
    """Plot-ready comparison of the losses over x_grid.
    Columns: x, squared, absolute, huber, pseudo_huber, and one hyperbolic_eta=<v> per eta.
    """
    x = np.asarray(x_grid, dtype=float)
    columns: Dict[str, np.ndarray] = {
        "x": x,
        "squared": 0.5 * x * x,
        "absolute": np.abs(x),
        "huber": huber(x, HUBER_C),
        "pseudo_huber": pseudo_huber(x, PSEUDO_HUBER_C),
    }
    for eta in eta_values:
        columns[f"hyperbolic_eta={eta:g}"] = hyperbolic_loss(x, eta, rho2)
    return pd.DataFrame(columns)
