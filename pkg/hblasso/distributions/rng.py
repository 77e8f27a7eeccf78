"""Seedable random streams and GIG parameter handling."""
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from hblasso.core.errors import DomainError
from hblasso.special.bessel import log_bessel_k_scaled

_UINT64_MAX = 2 ** 64 - 1


def _check_uint64(value: int, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise DomainError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < 0 or value > _UINT64_MAX:
        raise DomainError(f"{name} must lie in [0, 2**64 - 1], got {value}")
    return value


class RngStream:
    """Independent PCG64 stream identified by (seed, stream_id).
    Streams with the same pair replay the same draws; different stream ids
    are spawned children of one SeedSequence and are independent.
    Args:
        seed (int): Master seed, unsigned 64-bit
        stream_id (int): Chain or replication index, unsigned 64-bit
    """
    def __init__(self, seed: int = 0, stream_id: int = 0):
        self.seed = _check_uint64(seed, "seed")
        self.stream_id = _check_uint64(stream_id, "stream_id")
        sequence = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        self.generator = np.random.Generator(np.random.PCG64(sequence))

    def spawn(self, stream_id: int) -> "RngStream":
        """Sibling stream sharing this stream's seed."""
        return RngStream(self.seed, stream_id)

    def uniform(self, size: Optional[Union[int, Tuple[int, ...]]] = None):
        return self.generator.random(size)

    def normal(self, size: Optional[Union[int, Tuple[int, ...]]] = None):
        return self.generator.standard_normal(size)

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"


@dataclass(frozen=True)
class GigParams:
    """GIG(nu, eta, rho2) parameters.
    Density (1 / (2 rho2 K_nu(eta))) (x/rho2)^(nu-1) exp(-eta (x/rho2 + rho2/x) / 2).
    The (a, b) form has density proportional to x^(nu-1) exp(-(a x + b / x) / 2)
    with a = eta / rho2 and b = eta * rho2.
    """
    nu: float
    eta: float
    rho2: float

    def __post_init__(self):
        if not np.isfinite(self.nu):
            raise DomainError(f"GIG order must be finite, got {self.nu}")
        if not (np.isfinite(self.eta) and self.eta > 0):
            raise DomainError(f"GIG eta must be positive, got {self.eta}")
        if not (np.isfinite(self.rho2) and self.rho2 > 0):
            raise DomainError(f"GIG rho2 must be positive, got {self.rho2}")

    @classmethod
    def from_ab(cls, nu: float, a: float, b: float) -> "GigParams":
        if not (a > 0 and b > 0):
            raise DomainError(f"GIG a and b must be positive, got a={a}, b={b}")
        return cls(float(nu), float(np.sqrt(a * b)), float(np.sqrt(b / a)))

    @property
    def a(self) -> float:
        return self.eta / self.rho2

    @property
    def b(self) -> float:
        return self.eta * self.rho2

    def mean(self) -> float:
        """E[X] = rho2 K_{nu+1}(eta) / K_nu(eta)."""
        return float(self.rho2 * np.exp(log_bessel_k_scaled(self.nu + 1.0, self.eta)
                                        - log_bessel_k_scaled(self.nu, self.eta)))
