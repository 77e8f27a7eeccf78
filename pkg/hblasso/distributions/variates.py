"""Random-variate generators used by the Gibbs samplers.
Every function takes an RngStream and supports vectorized parameters.
GIG draws follow Devroye's rejection method, which is uniformly valid in
(nu, a, b); inverse Gaussian draws use the transformation with roots.
"""
import logging
import math
from typing import Optional, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import LinAlgError, cholesky, solve_triangular

from hblasso.core.errors import DomainError, SamplerError
from hblasso.distributions.rng import GigParams, RngStream

logger = logging.getLogger(__name__)

Size = Optional[Union[int, Tuple[int, ...]]]

_MAX_REJECTION_ROUNDS = 1000


def _positive(value: ArrayLike, name: str) -> NDArray[np.float64]:
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError(f"{name} must be positive and finite")
    return arr


def _unwrap(out: NDArray[np.float64], size: Size, scalar_params: bool):
    if size is None and scalar_params:
        return float(out.reshape(-1)[0])
    return out


def _psi(x, alpha, lam):
    return -alpha * (np.cosh(x) - 1.0) - lam * (np.expm1(x) - x)


def _dpsi(x, alpha, lam):
    return -alpha * np.sinh(x) - lam * np.expm1(x)


def _devroye(lam: NDArray[np.float64], omega: NDArray[np.float64],
             rng: RngStream) -> NDArray[np.float64]:
    """log of draws from the two-parameter GIG(lam, omega), lam >= 0, shifted by the mode."""
    alpha = omega * omega / (np.sqrt(omega * omega + lam * lam) + lam)

    x = -_psi(1.0, alpha, lam)
    t = np.where((x >= 0.5) & (x <= 2.0), 1.0,
                 np.where(x > 2.0, np.sqrt(2.0 / (alpha + lam)),
                          np.log(4.0 / (alpha + 2.0 * lam))))

    x = -_psi(-1.0, alpha, lam)
    s_alpha = np.log1p(1.0 / alpha + np.sqrt(1.0 / (alpha * alpha) + 2.0 / alpha))
    with np.errstate(divide="ignore"):
        s_small = np.where(lam > 0, np.minimum(1.0 / lam, s_alpha), s_alpha)
    s = np.where((x >= 0.5) & (x <= 2.0), 1.0,
                 np.where(x > 2.0, np.sqrt(4.0 / (alpha * np.cosh(1.0) + lam)), s_small))

    eta = -_psi(t, alpha, lam)
    zeta = -_dpsi(t, alpha, lam)
    theta = -_psi(-s, alpha, lam)
    xi = _dpsi(-s, alpha, lam)
    p = 1.0 / xi
    r = 1.0 / zeta
    td = t - r * eta
    sd = s - p * theta
    q = td + sd
    total = p + q + r

    out = np.empty_like(lam)
    pending = np.arange(lam.size)
    for _ in range(_MAX_REJECTION_ROUNDS):
        m = pending.size
        u, v, w = rng.uniform(m), rng.uniform(m), rng.uniform(m)
        qq, rr, pp, tt = q[pending], r[pending], p[pending], total[pending]
        tdd, sdd = td[pending], sd[pending]
        cand = np.where(u < qq / tt, -sdd + qq * v,
                        np.where(u < (qq + rr) / tt, tdd - rr * np.log(v), -sdd + pp * np.log(v)))
        with np.errstate(over="ignore"):
            f1 = np.exp(-eta[pending] - zeta[pending] * (cand - t[pending]))
            f2 = np.exp(-theta[pending] + xi[pending] * (cand + s[pending]))
        envelope = np.where((cand >= -sdd) & (cand <= tdd), 1.0, np.where(cand > tdd, f1, f2))
        accept = w * envelope <= np.exp(_psi(cand, alpha[pending], lam[pending]))
        out[pending[accept]] = cand[accept]
        pending = pending[~accept]
        if pending.size == 0:
            return out
    raise SamplerError(f"GIG rejection sampler did not accept after {_MAX_REJECTION_ROUNDS} rounds")


def _psi_scalar(x: float, alpha: float, lam: float) -> float:
    try:
        return -alpha * (math.cosh(x) - 1.0) - lam * (math.expm1(x) - x)
    except OverflowError:
        return -math.inf


def _devroye_scalar(lam: float, omega: float, rng: RngStream) -> float:
    """Scalar form of _devroye for a single (lam, omega); same envelope and draws."""
    alpha = omega * omega / (math.sqrt(omega * omega + lam * lam) + lam)

    x = -_psi_scalar(1.0, alpha, lam)
    if 0.5 <= x <= 2.0:
        t = 1.0
    elif x > 2.0:
        t = math.sqrt(2.0 / (alpha + lam))
    else:
        t = math.log(4.0 / (alpha + 2.0 * lam))

    x = -_psi_scalar(-1.0, alpha, lam)
    if 0.5 <= x <= 2.0:
        s = 1.0
    elif x > 2.0:
        s = math.sqrt(4.0 / (alpha * math.cosh(1.0) + lam))
    else:
        s = math.log1p(1.0 / alpha + math.sqrt(1.0 / (alpha * alpha) + 2.0 / alpha))
        if lam > 0:
            s = min(1.0 / lam, s)

    eta = -_psi_scalar(t, alpha, lam)
    zeta = alpha * math.sinh(t) + lam * math.expm1(t)
    theta = -_psi_scalar(-s, alpha, lam)
    xi = -alpha * math.sinh(-s) - lam * math.expm1(-s)
    p, r = 1.0 / xi, 1.0 / zeta
    td, sd = t - r * eta, s - p * theta
    q = td + sd
    total = p + q + r

    gen = rng.generator
    for _ in range(_MAX_REJECTION_ROUNDS):
        u, v, w = gen.random(), gen.random(), gen.random()
        if v == 0.0:
            continue
        if u < q / total:
            cand = -sd + q * v
        elif u < (q + r) / total:
            cand = td - r * math.log(v)
        else:
            cand = -sd + p * math.log(v)
        if -sd <= cand <= td:
            envelope = 1.0
        elif cand > td:
            envelope = math.exp(-eta - zeta * (cand - t))
        else:
            envelope = math.exp(-theta + xi * (cand + s))
        if w * envelope <= math.exp(_psi_scalar(cand, alpha, lam)):
            return cand
    raise SamplerError(f"GIG rejection sampler did not accept after {_MAX_REJECTION_ROUNDS} rounds")


def _gig_scalar(nu: float, a: float, b: float, rng: RngStream) -> float:
    lam = abs(nu)
    omega = math.sqrt(a * b)
    ratio = lam / omega
    log_x = _devroye_scalar(lam, omega, rng) + math.log(ratio + math.sqrt(1.0 + ratio * ratio))
    if nu < 0:
        log_x = -log_x
    return math.exp(log_x + 0.5 * (math.log(b) - math.log(a)))


def sample_gig_ab(nu: ArrayLike, a: ArrayLike, b: ArrayLike, rng: RngStream, size: Size = None):
    """Draw from GIG(nu, a, b), density proportional to x^(nu-1) exp(-(a x + b/x) / 2).
    Args:
        nu: Order (any real)
        a: Positive parameter(s)
        b: Positive parameter(s)
        rng (RngStream): Random stream
        size (int or tuple, optional): Output shape; parameters are broadcast to it
    Returns:
        float or ndarray: Positive draws
    Raises:
        DomainError: If a or b is not positive
    """
    a_arr = _positive(a, "GIG a")
    b_arr = _positive(b, "GIG b")
    nu_arr = np.asarray(nu, dtype=float)
    if not np.all(np.isfinite(nu_arr)):
        raise DomainError("GIG order must be finite")
    scalar_params = nu_arr.ndim == 0 and a_arr.ndim == 0 and b_arr.ndim == 0
    if scalar_params and size is None and 1e-100 < float(a_arr * b_arr) < 1e100:
        return _gig_scalar(float(nu_arr), float(a_arr), float(b_arr), rng)
    shape = np.broadcast_shapes(nu_arr.shape, a_arr.shape, b_arr.shape)
    if size is not None:
        shape = np.broadcast_shapes(shape, np.empty(size).shape)
    nu_b, a_b, b_b = (np.broadcast_to(v, shape).reshape(-1) for v in (nu_arr, a_arr, b_arr))
    lam = np.abs(nu_b)
    omega = np.sqrt(a_b * b_b)
    log_draw = _devroye(lam, omega, rng)
    ratio = lam / omega
    mode_shift = ratio + np.sqrt(1.0 + ratio * ratio)
    log_x = log_draw + np.log(mode_shift)
    log_x = np.where(nu_b < 0, -log_x, log_x)
    out = np.exp(log_x + 0.5 * (np.log(b_b) - np.log(a_b)))
    return _unwrap(out.reshape(shape), size, scalar_params)


def sample_gig(params: GigParams, rng: RngStream, size: Size = None):
    """Draw from GIG(nu, eta, rho2)."""
    return sample_gig_ab(params.nu, params.a, params.b, rng, size)


def sample_inv_gauss(mu: ArrayLike, lam: ArrayLike, rng: RngStream, size: Size = None):
    """Draw from the inverse Gaussian with mean mu and shape lam.
    The smaller root is written as mu / (1 + w + sqrt(w (w + 2))), which stays
    accurate when mu / lam is very large.
    """
    mu_arr = _positive(mu, "inverse Gaussian mean")
    lam_arr = _positive(lam, "inverse Gaussian shape")
    scalar_params = mu_arr.ndim == 0 and lam_arr.ndim == 0
    shape = np.broadcast_shapes(mu_arr.shape, lam_arr.shape)
    if size is not None:
        shape = np.broadcast_shapes(shape, np.empty(size).shape)
    mu_b = np.broadcast_to(mu_arr, shape)
    lam_b = np.broadcast_to(lam_arr, shape)
    z = rng.normal(shape)
    w = mu_b * z * z / (2.0 * lam_b)
    root = mu_b / (1.0 + w + np.sqrt(w * (w + 2.0)))
    u = rng.uniform(shape)
    out = np.where(u <= mu_b / (mu_b + root), root, mu_b * mu_b / root)
    out = np.asarray(out, dtype=float)
    return _unwrap(out, size, scalar_params)


def sample_gamma(shape: ArrayLike, rate: ArrayLike, rng: RngStream, size: Size = None):
    """Gamma draw parameterised by shape and rate."""
    k = _positive(shape, "gamma shape")
    beta = _positive(rate, "gamma rate")
    out = rng.generator.gamma(k, 1.0 / beta, size)
    if size is None and np.ndim(out) == 0:
        return float(out)
    return np.asarray(out, dtype=float)


def sample_exp(rate: ArrayLike, rng: RngStream, size: Size = None):
    """Exponential draw with the given rate; identical to gamma(1, rate)."""
    return sample_gamma(1.0, rate, rng, size)


def sample_inv_gamma(shape: ArrayLike, scale: ArrayLike, rng: RngStream, size: Size = None):
    """Inverse-gamma draw: 1 / Gamma(shape, rate=scale)."""
    draw = sample_gamma(shape, scale, rng, size)
    return 1.0 / draw


def sample_mvn_from_precision(h: ArrayLike, precision: ArrayLike, rng: RngStream) -> NDArray[np.float64]:
    """Draw from N(Q^-1 h, Q^-1) without inverting Q.
    With Q = L L^T the draw is L^-T (L^-1 h + z).
    Args:
        h: Linear term, length p
        precision: Symmetric positive definite p x p matrix Q
        rng (RngStream): Random stream
    Returns:
        ndarray: One draw of length p
    Raises:
        SamplerError: If Q is not numerically positive definite
    """
    h = np.asarray(h, dtype=float)
    precision = np.asarray(precision, dtype=float)
    if precision.ndim != 2 or precision.shape[0] != precision.shape[1] or precision.shape[0] != h.size:
        raise DomainError(f"precision shape {precision.shape} does not match h of length {h.size}")
    try:
        chol = cholesky(precision, lower=True, check_finite=True)
    except (LinAlgError, ValueError) as exc:
        raise SamplerError(f"precision matrix is not positive definite: {exc}") from exc
    half = solve_triangular(chol, h, lower=True)
    z = rng.normal(h.size)
    return solve_triangular(chol.T, half + z, lower=False)


def sample_hyperbolic(eta: float, rho2: float, rng: RngStream, size: Size = None):
    """Draw from the hyperbolic density proportional to exp(-sqrt(eta (eta + x^2 / rho2))).
    Normal variance mixture: s2 ~ GIG(1, eta, rho2), x | s2 ~ N(0, s2).
    """
    s2 = sample_gig(GigParams(1.0, float(eta), float(rho2)), rng, size)
    z = rng.normal(size)
    out = np.sqrt(s2) * z
    if size is None:
        return float(out)
    return out
