"""Special functions used by the samplers."""
from hblasso.special.bessel import d2log_k, dlog_k, k1_log_derivatives, log_bessel_k, log_bessel_k_scaled

__all__ = ["log_bessel_k_scaled", "log_bessel_k", "dlog_k", "d2log_k", "k1_log_derivatives"]
