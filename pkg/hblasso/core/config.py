"""Configuration management for hblasso.
Nested defaults merged with an optional JSON file and explicit overrides, plus the
validated views (FitConfig, RunConfig) the engines consume.
"""
import copy
import hashlib
import json
import os
from pathlib import Path
from typing import Any, Dict, Literal, Optional, Union

from pydantic import (BaseModel, ConfigDict, Field, NonNegativeInt, PositiveFloat,
                      PositiveInt, ValidationError, model_validator)

from hblasso.core.errors import ConfigError
from hblasso.model.types import Hyperparams

UINT64_MAX = 2 ** 64 - 1

DEFAULT_CONFIG = {
    "general": {
        "verbose": False,
        "num_workers": 1,
    },
    "sampler": {
        "iterations": 2500,
        "burn_in": 500,
        "thin": 1,
        "seed": 0,
        "store_full_state": False,
        "t_df": 3.0,
        "quantile": 0.5,
        "progress": False,
    },
    "hyper": {
        "a": 1.0,
        "b": 1.0,
        "c": 1.0,
        "d": 1.0,
        "eta": "learn",  # or a positive number for fixed eta
        "lambda": "learn",
        "fp_max_iter": 10,
        "fp_tol": 1e-8,
        "fp_init": "default",
    },
    "simulation": {
        "models": [1],
        "n_values": [100],
        "methods": ["BL", "mBL", "tBL", "HBL"],
        "replications": 50,
        "p": 20,
        "iterations": 2500,
        "burn_in": 500,
        "seed": 0,
    },
    "approx": {
        "n_grid": [10, 50, 100, 200],
        "ab_grid": [0.01, 0.1, 1.0],
        "datasets": 100,
        "mc_size": 10000,
        "seed": 0,
    },
    "cv": {
        "methods": ["BL", "mBL", "tBL", "HBL"],
        "base_iterations": 15000,
        "base_burn_in": 5000,
        "length_factor": 0.1,
        "warn_draws": 10000000,
        "seed": 0,
    },
    "influence": {
        "eta_list": [0.2, 0.5, 1.0],
        "x_values": [-0.5, 1.0],
        "z_min": -10.0,
        "z_max": 10.0,
        "z_points": 81,
        "n": 100,
        "draws": 10000,
        "burn_in": 1000,
        "g_draws": 2000,
        "seed": 0,
    },
    "sensitivity": {
        "parameters": ["a", "b", "c", "d"],
        "values": [0.1, 1.0, 10.0],
        "n_points": 50,
        "sigma": 0.03,
        "iterations": 4000,
        "burn_in": 1000,
        "seed": 0,
    },
    "multimodal": {
        "n": 5,
        "sigma": 0.03,
        "lambda": 3.0,
        "eta": 1.0,
        "iterations": 20000,
        "burn_in": 2000,
        "grid_points": 141,
        "bins": 60,
        "smoothing": 1.0,
        "seed": 0,
    },
    "timing": {
        "n": 200,
        "p_grid": [5, 10, 20, 50, 100],
        "methods": ["BL", "mBL", "tBL", "HBL"],
        "iterations": 15000,
        "burn_in": 5000,
        "runs": 10,
        "seed": 0,
    },
    "output": {
        "float_format": "%.17g",
    },
}


class Config:
    """Configuration manager: defaults < JSON file < explicit dictionary."""
    def __init__(self, config_dict: Optional[Dict] = None, config_path: Optional[Union[str, Path]] = None):
        """Initialize the configuration with default values and optional overrides.
        Args:
            config_dict (dict, optional): Configuration dictionary to override defaults
            config_path (str or Path, optional): Path to a JSON configuration file
        """
        self._config = copy.deepcopy(DEFAULT_CONFIG)
        if config_path:
            self._load_from_file(config_path)
        if config_dict:
            self._update_recursive(self._config, config_dict)

    def _load_from_file(self, config_path: Union[str, Path]):
        config_path = Path(config_path)
        if not config_path.exists():
            raise FileNotFoundError(f"Configuration file not found: {config_path}")
        with open(config_path, 'r', encoding='utf-8') as f:
            try:
                file_config = json.load(f)
            except json.JSONDecodeError:
                raise ValueError(f"Invalid JSON format in configuration file: {config_path}")
        if not isinstance(file_config, dict):
            raise ValueError(f"Configuration file must hold a JSON object: {config_path}")
        self._update_recursive(self._config, file_config)

    def _update_recursive(self, target: Dict, source: Dict):
        for key, value in source.items():
            if isinstance(value, dict) and key in target and isinstance(target[key], dict):
                self._update_recursive(target[key], value)
            else:
                target[key] = copy.deepcopy(value)

    def get(self, *keys, default=None):
        """Get a configuration value by keys.
        Args:
            *keys: Keys to access the nested configuration
            default: Default value if the key does not exist
        Returns:
            The configuration value or default if not found
        """
        value = self._config
        for key in keys:
            if isinstance(value, dict) and key in value:
                value = value[key]
            else:
                return default
        return value

    def set(self, value, *keys):
        """Set a configuration value by keys.
        Args:
            value: Value to set
            *keys: Keys to access the nested configuration
        Returns:
            self: For method chaining
        """
        if not keys:
            raise ValueError("At least one key must be provided to set a value.")
        target = self._config
        for key in keys[:-1]:
            if key not in target:
                target[key] = {}
            target = target[key]
        target[keys[-1]] = value
        return self

    def save(self, config_path: Union[str, Path]):
        config_path = Path(config_path)
        os.makedirs(config_path.parent, exist_ok=True)
        with open(config_path, 'w', encoding='utf-8') as f:
            json.dump(self._config, f, indent=4, sort_keys=True)
        return self

    def to_dict(self) -> Dict[str, Any]:
        return copy.deepcopy(self._config)

    def digest(self) -> str:
        """SHA-256 of the merged configuration (sorted-key JSON)."""
        payload = json.dumps(self._config, sort_keys=True, default=str)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def __getitem__(self, key: str) -> Any:
        if key in self._config:
            return self._config[key]
        raise KeyError(f"Configuration key '{key}' not found.")

    def __setitem__(self, key: str, value: Any):
        self._config[key] = value

    def __repr__(self) -> str:
        return f"Config({self._config})"

    def __str__(self) -> str:
        return json.dumps(self._config, indent=2, sort_keys=True, default=str)


def build(model_cls, data: Dict[str, Any]):
    """Validate `data` into `model_cls`, re-raising pydantic errors as ConfigError."""
    try:
        return model_cls.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(f"Invalid {model_cls.__name__}: {exc}") from exc


def _mode(value: Any, name: str):
    if value is None or (isinstance(value, str) and value.lower() in ("learn", "learned")):
        return "learned", 1.0
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be 'learn' or a positive number, got {value!r}")
    if not number > 0:
        raise ConfigError(f"{name} must be positive, got {number}")
    return "fixed", number


def hyperparams_from_config(config: "Config") -> Hyperparams:
    section = dict(config.get("hyper", default={}))
    eta_mode, eta = _mode(section.pop("eta", "learn"), "eta")
    lambda_mode, lam = _mode(section.pop("lambda", "learn"), "lambda")
    section.update(eta_mode=eta_mode, eta=eta, lambda_mode=lambda_mode, lam=lam)
    return build(Hyperparams, section)


SamplerKind = Literal["hbl", "hbl_fixed_eta", "bl", "mbl", "tbl", "hbl_unconditional"]


class FitConfig(BaseModel):
    """Settings of one MCMC run."""
    model_config = ConfigDict(frozen=True)

    iterations: PositiveInt = 2500
    burn_in: NonNegativeInt = 500
    thin: PositiveInt = 1
    hyper: Hyperparams = Field(default_factory=Hyperparams)
    sampler_kind: SamplerKind = "hbl"
    seed: int = Field(0, ge=0, le=UINT64_MAX)
    stream: int = Field(0, ge=0, le=UINT64_MAX)
    store_full_state: bool = False
    t_df: PositiveFloat = 3.0
    quantile: float = Field(0.5, gt=0.0, lt=1.0)
    progress: bool = False

    @model_validator(mode="after")
    def _burn_in_below_iterations(self):
        if self.burn_in >= self.iterations:
            raise ValueError(f"burn_in ({self.burn_in}) must be smaller than iterations ({self.iterations})")
        return self

    @property
    def kept(self) -> int:
        """Number of stored draws; trailing draws that do not fill a thinning interval are dropped."""
        return (self.iterations - self.burn_in) // self.thin

    def updated(self, **changes) -> "FitConfig":
        """Validated copy with some fields replaced."""
        data = {name: getattr(self, name) for name in type(self).model_fields}
        data.update(changes)
        return build(type(self), data)

    @classmethod
    def from_config(cls, config: "Config", **overrides) -> "FitConfig":
        section = config.get("sampler", default={})
        data = {key: section[key] for key in
                ("iterations", "burn_in", "thin", "seed", "store_full_state", "t_df", "quantile", "progress")
                if key in section}
        data["hyper"] = hyperparams_from_config(config)
        data.update(overrides)
        return build(cls, data)


Command = Literal["fit", "simulate", "validate-approx", "cv", "influence",
                  "demo-multimodal", "timing", "sensitivity", "losses"]

DATA_COMMANDS = ("fit", "cv")


class RunConfig(BaseModel):
    """Resolved settings of one CLI invocation."""
    model_config = ConfigDict(frozen=True)

    command: Command
    out: Path
    data: Optional[Path] = None
    response: Optional[str] = None
    method: str = "hbl"
    fit: FitConfig = Field(default_factory=FitConfig)
    num_workers: PositiveInt = 1
    verbose: bool = False
    config_hash: str = ""

    @model_validator(mode="after")
    def _data_present(self):
        if self.command in DATA_COMMANDS:
            if self.data is None or not Path(self.data).is_file():
                raise ValueError(f"command '{self.command}' needs an existing --data file, got {self.data}")
            if not self.response:
                raise ValueError(f"command '{self.command}' needs --response")
        return self
