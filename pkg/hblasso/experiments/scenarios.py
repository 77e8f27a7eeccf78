"""Simulation scenarios with AR(1)-correlated Gaussian covariates.

Model 1  Gaussian noise, sigma = 2, r = 0.5
Model 2  Gaussian noise, sigma = 2, r = 0.95
Model 3  contaminated normal 0.9 N(0, 1) + 0.1 N(0, 225) scaled to unit variance, sigma = 9.67, r = 0.5
Model 4  Laplace(0, 1) scaled to unit variance, sigma = 9.67, r = 0.5
"""
from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt, PositiveInt, model_validator
from scipy.linalg import cholesky, toeplitz

from hblasso.core.errors import DomainError
from hblasso.distributions.rng import RngStream
from hblasso.model.types import Dataset

#: (sigma, r, noise) per model id
MODEL_SETTINGS = {
    1: (2.0, 0.5, "gaussian"),
    2: (2.0, 0.95, "gaussian"),
    3: (9.67, 0.5, "contaminated"),
    4: (9.67, 0.5, "laplace"),
}
#: standard deviation of 0.9 N(0, 1) + 0.1 N(0, 225)
CONTAMINATED_SD = 4.83
CONTAMINATION_RATE = 0.1
CONTAMINATION_SD = 15.0


def default_truth(p: int) -> List[float]:
    """beta_0 = 1, beta_1 = 3, beta_2 = 0.5, beta_4 = beta_11 = 1, beta_7 = 1.5, others 0."""
    truth = np.zeros(p + 1)
    for j, value in {0: 1.0, 1: 3.0, 2: 0.5, 4: 1.0, 7: 1.5, 11: 1.0}.items():
        if j <= p:
            truth[j] = value
    return truth.tolist()


class ScenarioSpec(BaseModel):
    """One simulation scenario; sigma and r follow the model id."""
    model_config = ConfigDict(frozen=True)

    model_id: Literal[1, 2, 3, 4]
    n: PositiveInt = 100
    p: PositiveInt = 20
    r: Optional[float] = Field(None, gt=-1.0, lt=1.0)
    sigma: Optional[float] = None
    beta_truth: Optional[Tuple[float, ...]] = None
    replications: PositiveInt = 50
    seed: NonNegativeInt = 0

    @model_validator(mode="before")
    @classmethod
    def _fill_defaults(cls, data):
        if not isinstance(data, dict) or data.get("model_id") not in MODEL_SETTINGS:
            return data
        data = dict(data)
        sigma, r, _ = MODEL_SETTINGS[data["model_id"]]
        if data.get("sigma") is None:
            data["sigma"] = sigma
        if data.get("r") is None:
            data["r"] = r
        if data.get("beta_truth") is None:
            data["beta_truth"] = tuple(default_truth(int(data.get("p", 20))))
        return data

    @model_validator(mode="after")
    def _model_settings(self):
        sigma, r, _ = MODEL_SETTINGS[self.model_id]
        if self.sigma != sigma or self.r != r:
            raise ValueError(f"model {self.model_id} uses sigma={sigma}, r={r}; "
                             f"got sigma={self.sigma}, r={self.r}")
        if len(self.beta_truth) != self.p + 1:
            raise ValueError(f"beta_truth needs p + 1 = {self.p + 1} entries, got {len(self.beta_truth)}")
        return self

    @property
    def noise(self) -> str:
        return MODEL_SETTINGS[self.model_id][2]

    @property
    def truth(self) -> np.ndarray:
        return np.asarray(self.beta_truth, dtype=float)


def scenario_noise(kind: str, n: int, rng: RngStream) -> np.ndarray:
    """Unit-scale noise of the given kind."""
    gen = rng.generator
    if kind == "gaussian":
        return gen.standard_normal(n)
    if kind == "contaminated":
        outlier = gen.random(n) < CONTAMINATION_RATE
        v = gen.standard_normal(n) * np.where(outlier, CONTAMINATION_SD, 1.0)
        return v / CONTAMINATED_SD
    if kind == "laplace":
        return gen.laplace(0.0, 1.0, n) / np.sqrt(2.0)
    raise DomainError(f"Unknown noise kind: {kind}")


def gen_scenario(spec: ScenarioSpec, rep_index: int) -> Tuple[Dataset, np.ndarray]:
    """Simulated dataset for one replication.
    Args:
        spec (ScenarioSpec): Scenario
        rep_index (int): Replication index; selects the random stream
    Returns:
        tuple: (Dataset, truth) with truth = (beta_0, ..., beta_p)
    """
    if spec.model_id not in MODEL_SETTINGS:
        raise DomainError(f"Unknown model id: {spec.model_id}")
    rng = RngStream(spec.seed, rep_index)
    cov = toeplitz(spec.r ** np.arange(spec.p))
    chol = cholesky(cov, lower=True)
    x = rng.normal((spec.n, spec.p)) @ chol.T
    truth = spec.truth
    y = truth[0] + x @ truth[1:] + spec.sigma * scenario_noise(spec.noise, spec.n, rng)
    return Dataset(y=y, x=x), truth
