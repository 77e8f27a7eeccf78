"""CSV exporters for draws, summaries and experiment tables.
Every table is UTF-8 with a header row and floats written with 17 significant digits.
"""
import logging
from pathlib import Path
from typing import Union

import pandas as pd

from hblasso.data.loaders import FLOAT_FORMAT
from hblasso.diagnostics.summary import Summary, summarize
from hblasso.export.base import BaseExporter
from hblasso.model.types import PosteriorSamples

logger = logging.getLogger(__name__)


class TableExporter(BaseExporter):
    """Exporter for a pandas DataFrame."""
    def export(self, result: pd.DataFrame, output_path: Union[str, Path], **kwargs) -> Path:
        """Write `result` without the index.
        Args:
            result (pd.DataFrame): Table to write
            output_path (str or Path): Destination (".csv" is enforced)
            **kwargs:
                - float_format (str): printf-style float format, "%.17g" by default
        """
        output_path = self._target(output_path)
        frame = self._frame(result, **kwargs)
        frame.to_csv(output_path, index=False, encoding="utf-8",
                     float_format=kwargs.get("float_format") or FLOAT_FORMAT)
        logger.info("Wrote %d rows to %s", frame.shape[0], output_path)
        return output_path

    def _frame(self, result, **kwargs) -> pd.DataFrame:
        if not isinstance(result, pd.DataFrame):
            raise TypeError(f"{self.name} exporter expects a DataFrame, got {type(result).__name__}")
        return result

    @property
    def name(self) -> str:
        return "table"

    @property
    def extension(self) -> str:
        return "csv"


class SamplesExporter(TableExporter):
    """Post-burn-in draws, one column per parameter."""
    def _frame(self, result, **kwargs) -> pd.DataFrame:
        if not isinstance(result, PosteriorSamples):
            raise TypeError(f"samples exporter expects PosteriorSamples, got {type(result).__name__}")
        return result.to_frame()

    @property
    def name(self) -> str:
        return "samples"


class SummaryExporter(TableExporter):
    """Median, 95% interval and ESS per parameter.
    Accepts a Summary, or PosteriorSamples which are summarized first.
    """
    def _frame(self, result, **kwargs) -> pd.DataFrame:
        if isinstance(result, PosteriorSamples):
            result = summarize(result, include_sd=kwargs.get("include_sd", False))
        if not isinstance(result, Summary):
            raise TypeError(f"summary exporter expects Summary or PosteriorSamples, got {type(result).__name__}")
        return result.to_frame()

    @property
    def name(self) -> str:
        return "summary"


def read_table(path: Union[str, Path]) -> pd.DataFrame:
    """Read back any table written by these exporters."""
    return pd.read_csv(path, float_precision="round_trip", encoding="utf-8")
