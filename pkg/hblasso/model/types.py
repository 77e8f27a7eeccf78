"""Value types shared by the samplers, diagnostics and IO layers."""
import copy
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Literal, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, PositiveFloat, PositiveInt

from hblasso.core.errors import DataError, DomainError


@dataclass(frozen=True)
class Dataset:
    """Response vector and design matrix.
    When standardized, x_center/x_scale/y_center/y_scale hold the statistics of
    the raw data so coefficients can be mapped back to original units.
    """
    y: np.ndarray
    x: np.ndarray
    feature_names: Optional[Sequence[str]] = None
    response_name: str = "y"
    standardized: bool = False
    x_center: Optional[np.ndarray] = None
    x_scale: Optional[np.ndarray] = None
    y_center: Optional[float] = None
    y_scale: Optional[float] = None

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float).reshape(-1)
        x = np.asarray(self.x, dtype=float)
        if x.ndim == 1:
            x = x.reshape(-1, 1)
        if x.ndim != 2:
            raise DataError(f"design matrix must be 2-D, got shape {x.shape}")
        if y.size < 1 or x.shape[1] < 1:
            raise DataError(f"need n >= 1 and p >= 1, got n={y.size}, p={x.shape[1]}")
        if x.shape[0] != y.size:
            raise DataError(f"design has {x.shape[0]} rows but response has {y.size}")
        if not np.all(np.isfinite(y)):
            raise DataError("response contains non-finite values",
                            row=int(np.flatnonzero(~np.isfinite(y))[0]) + 1, column=self.response_name)
        if not np.all(np.isfinite(x)):
            row, col = np.argwhere(~np.isfinite(x))[0]
            raise DataError("design matrix contains non-finite values", row=int(row) + 1,
                            column=self.names[int(col)] if self.feature_names else f"x{int(col) + 1}")
        names = list(self.feature_names) if self.feature_names is not None else \
            [f"x{j + 1}" for j in range(x.shape[1])]
        if len(names) != x.shape[1]:
            raise DataError(f"{len(names)} feature names for {x.shape[1]} columns")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "feature_names", tuple(names))

    @property
    def names(self) -> List[str]:
        return list(self.feature_names)

    @property
    def n(self) -> int:
        return int(self.y.size)

    @property
    def p(self) -> int:
        return int(self.x.shape[1])

    def subset(self, rows: Sequence[int]) -> "Dataset":
        """Dataset restricted to the given rows (standardization metadata kept)."""
        rows = np.asarray(rows)
        return replace(self, y=self.y[rows], x=self.x[rows])

    def drop(self, row: int) -> "Dataset":
        keep = np.delete(np.arange(self.n), row)
        return self.subset(keep)


class Hyperparams(BaseModel):
    """Prior hyperparameters and the eta / lambda modes.
    lambda2 ~ Ga(a, b) and eta ~ Ga(c, d) when learned; `eta` and `lam` give the
    fixed values (or the starting values when learned).
    """
    model_config = ConfigDict(frozen=True)

    a: PositiveFloat = 1.0
    b: PositiveFloat = 1.0
    c: PositiveFloat = 1.0
    d: PositiveFloat = 1.0
    eta_mode: Literal["learned", "fixed"] = "learned"
    eta: PositiveFloat = 1.0
    lambda_mode: Literal["learned", "fixed"] = "learned"
    lam: PositiveFloat = 1.0
    fp_max_iter: PositiveInt = 10
    fp_tol: PositiveFloat = 1e-8
    fp_init: Literal["default", "alt"] = "default"


@dataclass(frozen=True)
class ChainState:
    """State of one HBL Gibbs iteration."""
    beta: np.ndarray
    tau2: np.ndarray
    sigma2: np.ndarray
    rho2: float
    lambda2: float
    eta: float

    def __post_init__(self):
        self._check(("beta", "tau2", "sigma2", "rho2", "lambda2", "eta"))

    def _check(self, names):
        for name in names:
            value = getattr(self, name)
            if name == "beta":
                if not np.all(np.isfinite(value)):
                    raise DomainError("beta must be finite")
            elif name in ("tau2", "sigma2"):
                values = np.asarray(value, dtype=float)
                if not np.all(np.isfinite(values)) or np.any(values <= 0):
                    raise DomainError(f"{name} must be positive and finite")
            elif not (np.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be positive and finite, got {value}")

    def evolve(self, **changes) -> "ChainState":
        """Copy with `changes` applied; only the changed blocks are re-checked."""
        state = copy.copy(self)
        for name, value in changes.items():
            if name not in self.__dataclass_fields__:
                raise TypeError(f"ChainState has no field {name!r}")
            object.__setattr__(state, name, value)
        state._check(changes)
        return state


@dataclass
class PosteriorSamples:
    """Post-burn-in, thinned draws; one column per parameter."""
    draws: np.ndarray
    names: List[str]
    burn_in: int = 0
    thin: int = 1
    info: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.draws = np.asarray(self.draws, dtype=float)
        if self.draws.ndim != 2 or self.draws.shape[1] != len(self.names):
            raise DomainError(f"draws of shape {self.draws.shape} do not match {len(self.names)} names")
        if len(set(self.names)) != len(self.names):
            raise DomainError("parameter names must be unique")
        self.names = list(self.names)

    @property
    def size(self) -> int:
        return int(self.draws.shape[0])

    def column(self, name: str) -> np.ndarray:
        try:
            return self.draws[:, self.names.index(name)]
        except ValueError:
            raise KeyError(f"Unknown parameter '{name}'. Available: {self.names}") from None

    def block(self, prefix: str) -> np.ndarray:
        """Columns named '<prefix>_1', '<prefix>_2', ... in order."""
        idx = [i for i, name in enumerate(self.names)
               if name.startswith(prefix + "_") and name[len(prefix) + 1:].isdigit()]
        return self.draws[:, idx]

    def coefficients(self) -> np.ndarray:
        """Intercept followed by beta_1..beta_p, one row per draw."""
        return np.column_stack([self.column("intercept"), self.block("beta")])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.draws, columns=self.names)
