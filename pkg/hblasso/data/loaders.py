"""Data loaders for numeric CSV input.
Files are read with round-trip float parsing, so values written with 17 significant
digits come back bit-exactly.
"""
import logging
import os
from pathlib import Path
from typing import Dict, Union

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike

from hblasso.core.errors import DataError
from hblasso.model.types import Dataset

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


class BaseLoader:
    """Base class for data loaders."""
    def load(self, path: Union[str, Path], **kwargs) -> Dataset:
        """Load data from the given path.
        Args:
            path (str or Path): Path to the data file
            **kwargs: Additional loader-specific parameters
        Returns:
            Dataset: Loaded data
        """
        raise NotImplementedError("Subclasses must implement load()")

    @property
    def name(self) -> str:
        raise NotImplementedError("Subclasses must implement name property")


class CSVLoader(BaseLoader):
    """Loader for rectangular numeric CSV files with a header row."""
    def load(self, path: Union[str, Path], response: str = "y", **kwargs) -> Dataset:
        """Load a CSV file into a Dataset.
        Args:
            path (str or Path): Path to the CSV file
            response (str): Name of the response column; the other columns form X in header order
        Returns:
            Dataset: Response and design
        Raises:
            DataError: On parse errors, non-numeric or non-finite cells and a missing response column
        """
        path = Path(path)
        if not path.is_file():
            raise FileNotFoundError(f"Data file not found: {path}")
        logger.info("Loading CSV data from %s", path)
        try:
            frame = pd.read_csv(path, float_precision="round_trip", **kwargs)
        except pd.errors.EmptyDataError:
            raise DataError(f"empty data file: {path}") from None
        except pd.errors.ParserError as exc:
            raise DataError(f"cannot parse {path}: {exc}") from None

        if response not in frame.columns:
            raise DataError(f"response column '{response}' not found; columns are {list(frame.columns)}")
        if frame.shape[1] < 2:
            raise DataError("need at least one predictor column next to the response")
        frame = _numeric(frame)
        features = [column for column in frame.columns if column != response]
        data = Dataset(y=frame[response].to_numpy(), x=frame[features].to_numpy(),
                       feature_names=[str(c) for c in features], response_name=str(response))
        logger.info("Loaded n=%d observations, p=%d predictors", data.n, data.p)
        return data

    @property
    def name(self) -> str:
        return "csv"


def _numeric(frame: pd.DataFrame) -> pd.DataFrame:
    """Convert every column to float, failing on the first bad cell (1-based data row)."""
    out = {}
    for column in frame.columns:
        values = pd.to_numeric(frame[column], errors="coerce")
        bad = values.isna() & frame[column].notna()
        if bad.any():
            row = int(np.flatnonzero(bad.to_numpy())[0])
            raise DataError(f"non-numeric cell {frame[column].iloc[row]!r}", row=row + 1, column=str(column))
        values = values.to_numpy(dtype=float)
        finite = np.isfinite(values)
        if not finite.all():
            row = int(np.flatnonzero(~finite)[0])
            raise DataError(f"non-finite cell {frame[column].iloc[row]!r}", row=row + 1, column=str(column))
        out[column] = values
    return pd.DataFrame(out, columns=frame.columns)


_LOADERS: Dict[str, BaseLoader] = {
    "csv": CSVLoader(),
}


def get_loader(loader_type: str) -> BaseLoader:
    """Get a loader instance by type.
    Raises:
        ValueError: If the loader type is not registered
    """
    if loader_type not in _LOADERS:
        raise ValueError(f"Unknown loader type: {loader_type}. "
                         f"Available types: {list(_LOADERS.keys())}")
    return _LOADERS[loader_type]


def register_loader(loader_type: str, loader_instance: BaseLoader):
    _LOADERS[loader_type] = loader_instance


def infer_loader_type(path: Union[str, Path]) -> str:
    extension = Path(path).suffix.lower()
    if extension in (".csv", ".txt"):
        return "csv"
    raise ValueError(f"Unsupported data file: {path}. Supported types are: {list(_LOADERS.keys())}")


def load_csv(path: Union[str, Path], response: str = "y") -> Dataset:
    """Load a numeric CSV; `response` names the response column."""
    return get_loader("csv").load(path, response=response)


def save_csv(data: Dataset, path: Union[str, Path], float_format: str = FLOAT_FORMAT) -> Path:
    """Write the response followed by the predictors, 17 significant digits by default."""
    path = Path(path)
    os.makedirs(path.parent, exist_ok=True)
    frame = pd.DataFrame(data.x, columns=data.names)
    frame.insert(0, data.response_name, data.y)
    frame.to_csv(path, index=False, float_format=float_format, encoding="utf-8")
    return path


def _degenerate(scale: float, center: float) -> bool:
    return not scale > 1e-12 * max(1.0, abs(center))


def standardize(data: Dataset) -> Dataset:
    """Center and scale y and every column of X to mean 0 and variance 1 (divisor n - 1).
    The raw centers and scales are kept on the returned Dataset for back_transform.
    Raises:
        DataError: If n < 2 or a column (or y) has zero variance
    """
    if data.n < 2:
        raise DataError(f"need at least 2 observations to standardize, got {data.n}")
    x_center = data.x.mean(axis=0)
    x_scale = data.x.std(axis=0, ddof=1)
    y_center = float(data.y.mean())
    y_scale = float(data.y.std(ddof=1))
    if _degenerate(y_scale, y_center):
        raise DataError("zero-variance response", column=data.response_name)
    for j, scale in enumerate(x_scale):
        if _degenerate(scale, x_center[j]):
            raise DataError("zero-variance column", column=data.names[j])
    logger.debug("Standardized %d columns", data.p)
    return Dataset(y=(data.y - y_center) / y_scale, x=(data.x - x_center) / x_scale,
                   feature_names=data.feature_names, response_name=data.response_name,
                   standardized=True, x_center=x_center, x_scale=x_scale,
                   y_center=y_center, y_scale=y_scale)


def back_transform(coefficients: ArrayLike, data: Dataset) -> np.ndarray:
    """Map (intercept, beta) rows fitted on standardized data to the original units.
    beta_j = y_scale b_j / x_scale_j and intercept = y_center + y_scale b_0 - sum_j beta_j x_center_j.
    Coefficients of unstandardized data are returned unchanged.
    """
    coef = np.array(coefficients, dtype=float)
    if coef.shape[-1] != data.p + 1:
        raise DataError(f"expected {data.p + 1} coefficients per row, got {coef.shape[-1]}")
    if not data.standardized:
        return coef
    beta = data.y_scale * coef[..., 1:] / data.x_scale
    intercept = data.y_center + data.y_scale * coef[..., 0] - beta @ data.x_center
    return np.concatenate([np.asarray(intercept)[..., None], beta], axis=-1)
