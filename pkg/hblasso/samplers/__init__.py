"""Gibbs samplers for hblasso.
This module provides the HBL samplers, the unconditional-prior variant and the
BL / mBL / tBL baselines behind one registry.
"""
from typing import Dict, Optional, Type

from hblasso.core.config import FitConfig
from hblasso.distributions.rng import RngStream
from hblasso.model.types import Dataset, PosteriorSamples
from hblasso.samplers.base import BaseSampler
from hblasso.samplers.baselines import BLSampler, MBLSampler, TBLSampler
from hblasso.samplers.hbl import HBLFixedEtaSampler, HBLSampler, gibbs_step, gibbs_sweep
from hblasso.samplers.unconditional import UnconditionalPriorSampler

_SAMPLERS: Dict[str, Type[BaseSampler]] = {
    "hbl": HBLSampler,
    "hbl_fixed_eta": HBLFixedEtaSampler,
    "bl": BLSampler,
    "mbl": MBLSampler,
    "tbl": TBLSampler,
    "hbl_unconditional": UnconditionalPriorSampler,
}

#: alternative spellings accepted by canonical_kind
_ALIASES = {
    "hbl_fixed": "hbl_fixed_eta",
    "hbl_unconditional_prior": "hbl_unconditional",
}


def canonical_kind(kind: str) -> str:
    """Registry key for a sampler or method name ("HBL" -> "hbl")."""
    key = kind.lower()
    return _ALIASES.get(key, key)


def get_sampler(kind: str, config: FitConfig) -> BaseSampler:
    """Get a sampler instance by name.
    Args:
        kind (str): Sampler name, case-insensitive ("HBL", "bl", "mBL", ...)
        config (FitConfig): Settings of the run
    Returns:
        BaseSampler: Sampler instance
    Raises:
        ValueError: If the sampler is not registered
    """
    key = canonical_kind(kind)
    if key not in _SAMPLERS:
        raise ValueError(f"Unknown sampler: {kind}. Available samplers: {list(_SAMPLERS.keys())}")
    return _SAMPLERS[key](config)


def register_sampler(kind: str, sampler_cls: Type[BaseSampler]):
    """Register a new sampler class under `kind`."""
    _SAMPLERS[kind.lower()] = sampler_cls


def available_samplers():
    return list(_SAMPLERS.keys())


def run_chain(data: Dataset, config: FitConfig, rng: Optional[RngStream] = None) -> PosteriorSamples:
    """Run the sampler named by config.sampler_kind.
    Args:
        data (Dataset): Response and design
        config (FitConfig): Chain length, hyperparameters, seed and stream
        rng (RngStream, optional): Overrides the (seed, stream) stream
    Returns:
        PosteriorSamples: Post-burn-in, thinned draws
    """
    return get_sampler(config.sampler_kind, config).run(data, rng)


def run_baseline(kind: str, data: Dataset, config: FitConfig,
                 rng: Optional[RngStream] = None) -> PosteriorSamples:
    """Run one of the BL / mBL / tBL baselines."""
    key = canonical_kind(kind)
    if key not in ("bl", "mbl", "tbl"):
        raise ValueError(f"Unknown baseline: {kind}. Available baselines: ['bl', 'mbl', 'tbl']")
    return get_sampler(key, config.updated(sampler_kind=key)).run(data, rng)


def run_unconditional_prior_chain(data: Dataset, config: FitConfig, lam: float, eta: float,
                                  rng: Optional[RngStream] = None) -> PosteriorSamples:
    """HBL chain under the unconditional Laplace prior with lambda and eta fixed."""
    hyper = config.hyper.model_copy(update={"lambda_mode": "fixed", "lam": float(lam),
                                            "eta_mode": "fixed", "eta": float(eta)})
    config = config.updated(hyper=hyper, sampler_kind="hbl_unconditional")
    return UnconditionalPriorSampler(config).run(data, rng)


__all__ = [
    "get_sampler", "register_sampler", "available_samplers", "canonical_kind",
    "run_chain", "run_baseline", "run_unconditional_prior_chain",
    "gibbs_step", "gibbs_sweep",
    "BaseSampler", "HBLSampler", "HBLFixedEtaSampler", "UnconditionalPriorSampler",
    "BLSampler", "MBLSampler", "TBLSampler",
]
