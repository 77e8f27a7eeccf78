"""Core pipeline implementation for hblasso.
This module chains loading, standardization, fitting, summarizing and exporting a
single regression fit.
"""
import json
import logging
from functools import partial
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from hblasso.core.config import Config, FitConfig
from hblasso.core.errors import ConfigError, HBLassoError
from hblasso.core.parallel import parallel_map
from hblasso.data.loaders import get_loader, infer_loader_type
from hblasso.data.loaders import standardize as standardize_data
from hblasso.diagnostics.metrics import loocv_metrics
from hblasso.diagnostics.summary import summarize
from hblasso.export import get_exporter
from hblasso.model.types import Dataset, PosteriorSamples
from hblasso.samplers import canonical_kind, run_chain

logger = logging.getLogger(__name__)

SAMPLES_FILE = "samples.csv"
SUMMARY_FILE = "summary.csv"
MANIFEST_FILE = "manifest.txt"


def run_manifest(samples: PosteriorSamples, fit_config: FitConfig, config: Config,
                 **extra: Any) -> Dict[str, Any]:
    """Entries needed to reproduce a fit: seed, stream, config hash, version, chain lengths
    and the eta fixed-point convergence rate."""
    from hblasso import __version__

    info = samples.info
    entries = {
        "version": __version__,
        "config_hash": config.digest(),
        "config": json.dumps(config.to_dict(), sort_keys=True, default=str),
        "sampler": info.get("sampler", fit_config.sampler_kind),
        "seed": fit_config.seed,
        "stream": fit_config.stream,
        "iterations": fit_config.iterations,
        "burn_in": fit_config.burn_in,
        "thin": fit_config.thin,
        "draws": samples.size,
        "seconds": info.get("seconds", float("nan")),
        "degenerate_draws": info.get("degenerate_draws", 0),
        "eta_fixed_point_rate": info.get("eta_fixed_point_rate", float("nan")),
        "eta_fixed_point_mean_iterations": info.get("eta_fixed_point_mean_iterations", float("nan")),
    }
    entries.update(extra)
    return entries


class Pipeline:
    """Load -> standardize -> fit -> summarize -> export for one dataset.
    Example:
        Pipeline(config).load("data.csv", "y").standardize().fit("hbl").summarize().export("out")
    """
    def __init__(self, config: Optional[Union[Dict, Config]] = None, verbose: bool = False):
        """Initialize the pipeline with a configuration.
        Args:
            config (dict or Config, optional): Overrides of the default configuration
            verbose (bool): Log at INFO level instead of WARNING
        """
        self.config = config if isinstance(config, Config) else Config(config)
        self.verbose = verbose
        self._setup_logging()
        self.data_path: Optional[Path] = None
        self.data: Optional[Dataset] = None
        self.fit_config: Optional[FitConfig] = None
        self.samples: Optional[PosteriorSamples] = None
        self.summary = None
        self.results: Dict[str, Any] = {}
        logger.info("Pipeline initialized (config hash %s)", self.config.digest()[:12])

    def _setup_logging(self):
        level = logging.INFO if self.verbose else logging.WARNING
        logging.basicConfig(
            level=level,
            format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        )

    def load(self, data_path: Union[str, Path], response: str, data_type: Optional[str] = None, **kwargs):
        """Load input data.
        Args:
            data_path (str or Path): Path to the data file
            response (str): Response column
            data_type (str, optional): Loader name; inferred from the extension if not given
        Returns:
            self: Pipeline instance for method chaining
        """
        self.data_path = Path(data_path)
        data_type = data_type or infer_loader_type(self.data_path)
        self.data = get_loader(data_type).load(self.data_path, response=response, **kwargs)
        self.results["response"] = response
        return self

    def with_data(self, data: Dataset):
        """Use an in-memory Dataset instead of a file."""
        self.data = data
        return self

    def standardize(self):
        """Standardize y and X to mean 0, variance 1."""
        if self.data is None:
            raise ValueError("No data loaded. Please call load() first.")
        self.data = standardize_data(self.data)
        return self

    def fit(self, method: Optional[str] = None, **overrides):
        """Run one chain.
        Args:
            method (str, optional): Sampler name ("hbl", "hbl_fixed", "bl", "mbl", "tbl", ...);
                "hbl" when not given
            **overrides: FitConfig fields that take precedence over the configuration
        Returns:
            self: Pipeline instance for method chaining
        """
        if self.data is None:
            raise ValueError("No data loaded. Please call load() first.")
        kind = canonical_kind(method or overrides.pop("sampler_kind", "hbl"))
        self.fit_config = FitConfig.from_config(self.config, sampler_kind=kind, **overrides)
        self.samples = run_chain(self.data, self.fit_config)
        self.results["method"] = kind
        return self

    def summarize(self, include_sd: bool = False):
        if self.samples is None:
            raise ValueError("No samples available. Please call fit() first.")
        self.summary = summarize(self.samples, include_sd=include_sd)
        return self

    def export(self, output_dir: Union[str, Path], **kwargs):
        """Write samples.csv, summary.csv and manifest.txt into output_dir.
        Args:
            output_dir (str or Path): Output directory, created if needed
            **kwargs: Extra manifest entries
        Returns:
            self: Pipeline instance for method chaining
        """
        if self.samples is None:
            raise ValueError("No samples available. Please call fit() first.")
        if self.summary is None:
            self.summarize()
        output_dir = Path(output_dir)
        output_dir.mkdir(parents=True, exist_ok=True)
        float_format = self.config.get("output", "float_format")
        paths = {
            "samples": get_exporter("samples").export(self.samples, output_dir / SAMPLES_FILE,
                                                       float_format=float_format),
            "summary": get_exporter("summary").export(self.summary, output_dir / SUMMARY_FILE,
                                                       float_format=float_format),
        }
        extra = {"method": self.results.get("method"), "n": self.data.n, "p": self.data.p,
                 "standardized": self.data.standardized}
        if self.data_path is not None:
            extra.update(data=str(self.data_path), response=self.results.get("response"))
        extra.update(kwargs)
        manifest = run_manifest(self.samples, self.fit_config, self.config, **extra)
        paths["manifest"] = get_exporter("manifest").export(manifest, output_dir / MANIFEST_FILE)
        self.results.update(paths)
        logger.info("Results exported to %s", output_dir)
        return self

    def run_pipeline(self, data_path: Union[str, Path], response: str, output_dir: Union[str, Path],
                     method: str = "hbl", standardize: bool = True, **overrides):
        """Run the whole chain from the CSV file to the exported artifacts."""
        self.load(data_path, response)
        if standardize:
            self.standardize()
        return self.fit(method, **overrides).summarize().export(output_dir)


CV_COLUMNS = ["method", "MSPE", "MAPE", "MHPE", "MedSPE"]


def cv_chain_lengths(config: Config) -> Tuple[int, int]:
    """Base chain lengths of the "cv" section scaled by its length_factor."""
    section = config.get("cv", default={})
    factor = float(section.get("length_factor", 0.1))
    if not factor > 0:
        raise ConfigError(f"cv.length_factor must be positive, got {factor}")
    iterations = max(int(round(section.get("base_iterations", 15000) * factor)), 2)
    burn_in = min(int(round(section.get("base_burn_in", 5000) * factor)), iterations - 1)
    return iterations, burn_in


def _fold(task, data: Dataset, config: FitConfig) -> np.ndarray:
    index, (method, row) = task
    fit_config = config.updated(sampler_kind=canonical_kind(method), stream=index)
    try:
        samples = run_chain(data.drop(row), fit_config)
    except HBLassoError as exc:
        logger.error("LOOCV fold failed (method=%s, row=%d): %s", method, row + 1, exc)
        return np.full(data.p + 1, np.nan)
    return np.median(samples.coefficients(), axis=0)


def cross_validate(data: Dataset, methods: Sequence[str], config: Config, num_workers: int = 1,
                   progress: bool = False, **overrides) -> pd.DataFrame:
    """Leave-one-out prediction errors per method.
    Every fold refits the chain without one row and predicts it with the posterior
    medians of (intercept, beta).
    Args:
        data (Dataset): Data, usually standardized
        methods (list): Method names
        config (Config): Supplies the "cv" chain lengths and seed, and the hyperparameters
        num_workers (int): Worker processes over folds
        **overrides: FitConfig fields taking precedence over the configuration
    Returns:
        pd.DataFrame: Columns method, MSPE, MAPE, MHPE, MedSPE; NaN metrics for a method with failed folds
    """
    section = config.get("cv", default={})
    iterations, burn_in = cv_chain_lengths(config)
    settings = {"iterations": iterations, "burn_in": burn_in, "seed": int(section.get("seed", 0))}
    settings.update(overrides)
    fit_config = FitConfig.from_config(config, **settings)
    total = data.n * fit_config.iterations * len(methods)
    if total > section.get("warn_draws", 10_000_000):
        logger.warning("LOOCV runs %d chains of %d iterations (%d draws in total)",
                       data.n * len(methods), fit_config.iterations, total)

    tasks = list(enumerate((method, row) for method in methods for row in range(data.n)))
    worker = partial(_fold, data=data, config=fit_config)
    folds = parallel_map(worker, tasks, num_workers, desc="loocv", progress=progress)
    rows = []
    for m, method in enumerate(methods):
        coef = np.vstack(folds[m * data.n:(m + 1) * data.n])
        if np.all(np.isfinite(coef)):
            metrics = loocv_metrics(data, coef)
        else:
            logger.warning("%s: failed folds, metrics not reported", method)
            metrics = dict.fromkeys(CV_COLUMNS[1:], float("nan"))
        rows.append({"method": method, **metrics})
    return pd.DataFrame(rows, columns=CV_COLUMNS)
