"""Base sampler interface and the shared chain loop."""
import logging
import time
from abc import ABC, abstractmethod
from contextlib import contextmanager
from typing import Any, Dict, List, Optional

import numpy as np
from scipy.linalg import LinAlgError
from tqdm import tqdm

from hblasso.core.config import FitConfig
from hblasso.core.errors import DomainError, SamplerError
from hblasso.distributions.rng import RngStream
from hblasso.model.types import Dataset, PosteriorSamples
from hblasso.samplers.updates import BETA2_FLOOR

logger = logging.getLogger(__name__)


@contextmanager
def labelled(step: str):
    """Re-raise numeric failures inside a Gibbs update as SamplerError(step=...)."""
    try:
        yield
    except SamplerError as exc:
        if exc.step is None:
            exc.step = step
        raise
    except (DomainError, LinAlgError, FloatingPointError, ZeroDivisionError) as exc:
        raise SamplerError(str(exc), step=step) from exc


class BaseSampler(ABC):
    """Base class for Gibbs samplers.
    Subclasses define the state, one sweep, and what is recorded per draw. By
    default the chain runs on centered data and the intercept is recovered per
    draw as mean(y) - mean(x)' beta, stored as the first column. Samplers with
    `center = False` see the data as given and name every recorded column.
    """
    center: bool = True

    def __init__(self, config: FitConfig):
        self.config = config
        self.info: Dict[str, Any] = {}

    @property
    @abstractmethod
    def name(self) -> str:
        """Sampler name."""

    @abstractmethod
    def initial_state(self, data: Dataset) -> Any:
        """Starting state (for centered data unless center is False)."""

    @abstractmethod
    def step(self, state: Any, data: Dataset, rng: RngStream) -> Any:
        """One full Gibbs sweep."""

    @abstractmethod
    def state_names(self, data: Dataset) -> List[str]:
        """Names of the values returned by record(); the intercept is added when centering."""

    @abstractmethod
    def record(self, state: Any) -> np.ndarray:
        """Flat vector of recorded values; beta_1..beta_p come first when centering.
        States expose `beta`."""

    def reset_info(self):
        self.info = {}

    def finalize_info(self) -> Dict[str, Any]:
        """Sampler-specific diagnostics added to PosteriorSamples.info."""
        return {}

    def run(self, data: Dataset, rng: Optional[RngStream] = None) -> PosteriorSamples:
        """Iterate the sampler and collect post-burn-in, thinned draws.
        Args:
            data (Dataset): Data; centered internally when center is True
            rng (RngStream, optional): Stream; defaults to (config.seed, config.stream)
        Returns:
            PosteriorSamples: Draws of intercept, beta and the sampler's scalar parameters
        Raises:
            SamplerError: On the first failing update, tagged with iteration and step
        """
        cfg = self.config
        rng = rng if rng is not None else RngStream(cfg.seed, cfg.stream)
        if self.center:
            x_mean = data.x.mean(axis=0)
            y_mean = float(data.y.mean())
            work = Dataset(y=data.y - y_mean, x=data.x - x_mean, feature_names=data.feature_names,
                           response_name=data.response_name)
            names = ["intercept"] + self.state_names(work)
        else:
            work = data
            names = self.state_names(work)
        draws = np.empty((cfg.kept, len(names)))
        self.reset_info()
        state = self.initial_state(work)
        logger.info("Running %s: %d iterations, burn-in %d, thin %d (n=%d, p=%d)",
                    self.name, cfg.iterations, cfg.burn_in, cfg.thin, data.n, data.p)
        start = time.perf_counter()
        row = 0
        degenerate = 0
        for iteration in tqdm(range(cfg.iterations), desc=self.name, disable=not cfg.progress):
            try:
                state = self.step(state, work, rng)
            except SamplerError as exc:
                exc.iteration = iteration
                exc.sampler = self.name
                logger.error("Chain failed: %s", exc)
                raise
            degenerate += int(np.count_nonzero(np.abs(state.beta) < BETA2_FLOOR))
            post = iteration - cfg.burn_in + 1
            if post > 0 and post % cfg.thin == 0 and row < cfg.kept:
                values = self.record(state)
                if self.center:
                    draws[row, 0] = y_mean - float(x_mean @ values[:data.p])
                    draws[row, 1:] = values
                else:
                    draws[row] = values
                row += 1
        seconds = time.perf_counter() - start
        info = {"sampler": self.name, "seconds": seconds, "iterations": cfg.iterations,
                "seed": rng.seed, "stream": rng.stream_id, "degenerate_draws": degenerate}
        info.update(self.finalize_info())
        logger.info("%s finished in %.2f s", self.name, seconds)
        return PosteriorSamples(draws=draws, names=names, burn_in=cfg.burn_in, thin=cfg.thin, info=info)
