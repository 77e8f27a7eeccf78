"""hblasso: robust sparse Bayesian linear regression with the Bayesian Huberized lasso.
Gibbs samplers with a learned robustness parameter, Bayesian lasso baselines, and the
simulation, prediction and influence-function harnesses around them.
"""
__version__ = "0.1.0"

from hblasso.core.pipeline import Pipeline


def create_pipeline(config=None, verbose=False):
    """Create a new fit pipeline with optional configuration.
    Args:
        config (dict, optional): Configuration overrides
        verbose (bool): Whether to log at INFO level
    Returns:
        Pipeline: Configured pipeline
    """
    return Pipeline(config=config, verbose=verbose)


def fit(data, method="hbl", config=None, **overrides):
    """Run one chain on a Dataset and return its PosteriorSamples.
    Args:
        data (Dataset): Response and design (used as given, not standardized)
        method (str): Sampler name ("hbl", "hbl_fixed", "bl", "mbl", "tbl")
        config (dict, optional): Configuration overrides
        **overrides: FitConfig fields (iterations, burn_in, seed, ...)
    """
    from hblasso.core.config import Config, FitConfig
    from hblasso.samplers import canonical_kind, run_chain

    fit_config = FitConfig.from_config(Config(config), sampler_kind=canonical_kind(method), **overrides)
    return run_chain(data, fit_config)


__all__ = [
    "create_pipeline",
    "fit",
    "Pipeline",
    "__version__",
]
