"""Modified Bessel functions of the second kind in log / scaled form.
All evaluations go through the exponentially scaled K_nu^e(x) = e^x K_nu(x) from
scipy.special.kve. Where kve overflows (tiny x, large |nu|) the small-argument
asymptotic form is used instead. The log-derivatives switch to the Hankel
expansion for large arguments, where differences of Bessel ratios cancel.
"""
import math
from typing import Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import gammaln, kve

from hblasso.core.errors import DomainError

Real = Union[float, NDArray[np.float64]]

#: below this the Hankel series is not used for derivatives
HANKEL_MIN_X = 50.0
_HANKEL_TERMS = 40


def _as_positive(x: ArrayLike, name: str = "x") -> Tuple[NDArray[np.float64], bool]:
    scalar = np.ndim(x) == 0
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError(f"{name} must be positive and finite")
    return arr, scalar


def _small_x_log_k(nu: NDArray[np.float64], x: NDArray[np.float64]) -> NDArray[np.float64]:
    """Leading small-argument term of log K_nu(x) (unscaled)."""
    out = np.empty_like(x)
    big = nu > 1e-10
    out[big] = gammaln(nu[big]) - np.log(2.0) + nu[big] * (np.log(2.0) - np.log(x[big]))
    inner = np.maximum(-np.log(x[~big] / 2.0) - np.euler_gamma, np.finfo(float).tiny)
    out[~big] = np.log(inner)
    return out


def log_bessel_k_scaled(nu: ArrayLike, x: ArrayLike) -> Real:
    """Natural log of e^x K_nu(x).
    Args:
        nu: Order (any real; K is symmetric in the order)
        x: Positive finite argument
    Returns:
        float or ndarray: log(e^x K_nu(x)), broadcast over nu and x
    Raises:
        DomainError: If x is not positive and finite
    """
    x_arr, x_scalar = _as_positive(x)
    nu_arr = np.abs(np.asarray(nu, dtype=float))
    if not np.all(np.isfinite(nu_arr)):
        raise DomainError("nu must be finite")
    nu_b, x_b = np.broadcast_arrays(nu_arr, x_arr)
    nu_b = np.array(nu_b, dtype=float)
    x_b = np.array(x_b, dtype=float)
    with np.errstate(over="ignore", divide="ignore"):
        result = np.log(kve(nu_b, x_b))
    bad = ~np.isfinite(result)
    if np.any(bad):
        result[bad] = _small_x_log_k(nu_b[bad], x_b[bad]) + x_b[bad]
    if x_scalar and np.ndim(nu) == 0:
        return float(result.reshape(-1)[0])
    return result


def _ratio(nu_num: NDArray[np.float64], nu_den: NDArray[np.float64],
           x: NDArray[np.float64]) -> NDArray[np.float64]:
    """K_{nu_num}(x) / K_{nu_den}(x)."""
    return np.exp(log_bessel_k_scaled(nu_num, x) - log_bessel_k_scaled(nu_den, x))


def _hankel_sums(nu: NDArray[np.float64], x: NDArray[np.float64]):
    """S, S', S'' of the Hankel series K_nu(x) = sqrt(pi/2x) e^-x S(x).
    The series is truncated at its smallest term.
    """
    mu = 4.0 * nu * nu
    k = np.arange(1, _HANKEL_TERMS + 1, dtype=float)[:, None]
    factors = (mu[None, :] - (2.0 * k - 1.0) ** 2) / (8.0 * k * x[None, :])
    terms = np.vstack([np.ones((1, x.size)), np.cumprod(factors, axis=0)])
    mag = np.abs(terms)
    shrinking = np.vstack([np.ones((1, x.size), dtype=bool), mag[1:] <= mag[:-1]])
    terms = np.where(np.logical_and.accumulate(shrinking, axis=0), terms, 0.0)
    order = np.arange(_HANKEL_TERMS + 1, dtype=float)[:, None]
    s0 = terms.sum(axis=0)
    s1 = -(order * terms).sum(axis=0) / x
    s2 = (order * (order + 1.0) * terms).sum(axis=0) / (x * x)
    return s0, s1, s2


def _hankel_region(nu: NDArray[np.float64], x: NDArray[np.float64]) -> NDArray[np.bool_]:
    return x >= np.maximum(HANKEL_MIN_X, 2.0 * nu * nu)


def _prepare(nu: ArrayLike, eta: ArrayLike):
    x_arr, x_scalar = _as_positive(eta, "eta")
    nu_arr = np.abs(np.asarray(nu, dtype=float))
    nu_b, x_b = np.broadcast_arrays(nu_arr, x_arr)
    scalar = x_scalar and np.ndim(nu) == 0
    return np.array(nu_b, dtype=float).reshape(-1), np.array(x_b, dtype=float).reshape(-1), \
        x_b.shape, scalar


def dlog_k(nu: ArrayLike, eta: ArrayLike) -> Real:
    """First derivative of log K_nu(eta) with respect to eta.
    Uses K'_nu = -(K_{nu-1} + K_{nu+1}) / 2.
    Args:
        nu: Order
        eta: Positive argument
    Returns:
        float or ndarray: d/deta log K_nu(eta), always below -1
    Raises:
        DomainError: If eta is not positive and finite
    """
    nu_f, x_f, shape, scalar = _prepare(nu, eta)
    out = np.empty_like(x_f)
    far = _hankel_region(nu_f, x_f)
    near = ~far
    if np.any(near):
        n, x = nu_f[near], x_f[near]
        out[near] = -0.5 * (_ratio(n - 1.0, n, x) + _ratio(n + 1.0, n, x))
    if np.any(far):
        n, x = nu_f[far], x_f[far]
        s0, s1, _ = _hankel_sums(n, x)
        out[far] = -1.0 - 0.5 / x + s1 / s0
    if scalar:
        return float(out[0])
    return out.reshape(shape)


def d2log_k(nu: ArrayLike, eta: ArrayLike) -> Real:
    """Second derivative of log K_nu(eta) with respect to eta.
    K''/K - (K'/K)^2 with K'' = (K_{nu-2} + 2 K_nu + K_{nu+2}) / 4.
    Args:
        nu: Order
        eta: Positive argument
    Returns:
        float or ndarray: d^2/deta^2 log K_nu(eta), strictly positive
    Raises:
        DomainError: If eta is not positive and finite
    """
    nu_f, x_f, shape, scalar = _prepare(nu, eta)
    out = np.empty_like(x_f)
    far = _hankel_region(nu_f, x_f)
    near = ~far
    if np.any(near):
        n, x = nu_f[near], x_f[near]
        first = -0.5 * (_ratio(n - 1.0, n, x) + _ratio(n + 1.0, n, x))
        second = 0.25 * (_ratio(n - 2.0, n, x) + 2.0 + _ratio(n + 2.0, n, x))
        out[near] = second - first * first
    if np.any(far):
        n, x = nu_f[far], x_f[far]
        s0, s1, s2 = _hankel_sums(n, x)
        g = s1 / s0
        out[far] = 0.5 / (x * x) + s2 / s0 - g * g
    if scalar:
        return float(out[0])
    return out.reshape(shape)


def log_bessel_k(nu: ArrayLike, x: ArrayLike) -> Real:
    """Unscaled log K_nu(x)."""
    scaled = log_bessel_k_scaled(nu, x)
    if np.ndim(scaled) == 0:
        return float(scaled) - float(np.asarray(x, dtype=float))
    return scaled - np.asarray(x, dtype=float)


_ORDERS_012 = np.array([0.0, 1.0, 2.0])


def _hankel_k1(x: float) -> Tuple[float, float]:
    """Scalar Hankel-series log-derivatives of K_1, truncated like _hankel_sums."""
    term = 1.0
    s0, s1, s2 = 1.0, 0.0, 0.0
    for k in range(1, _HANKEL_TERMS + 1):
        following = term * (4.0 - (2.0 * k - 1.0) ** 2) / (8.0 * k * x)
        if abs(following) > abs(term) or following == 0.0:
            break
        term = following
        s0 += term
        s1 += k * term
        s2 += k * (k + 1.0) * term
    g = -s1 / (x * s0)
    return -1.0 - 0.5 / x + g, 0.5 / (x * x) + s2 / (x * x * s0) - g * g


def k1_log_derivatives(eta: float) -> Tuple[float, float]:
    """(dlog_k(1, eta), d2log_k(1, eta)) for one scalar eta.
    K_0, K_1 and K_2 come from a single kve call; K_{-1} = K_1 and
    K_3 = K_1 + 4 K_2 / eta close the recurrences.
    Raises:
        DomainError: If eta is not positive and finite
    """
    eta = float(eta)
    if not (math.isfinite(eta) and eta > 0.0):
        raise DomainError("eta must be positive and finite")
    if eta >= HANKEL_MIN_X:
        return _hankel_k1(eta)
    k0, k1, k2 = kve(_ORDERS_012, eta)
    if not (math.isfinite(k2) and k1 > 0.0):
        return float(dlog_k(1.0, eta)), float(d2log_k(1.0, eta))
    r0, r2 = k0 / k1, k2 / k1
    first = -0.5 * (r0 + r2)
    second = 1.0 + r2 / eta
    return float(first), float(second - first * first)
