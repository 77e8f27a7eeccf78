"""Base exporter interface for hblasso results.
"""
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Union


class BaseExporter(ABC):
    """Base class for result exporters."""
    @abstractmethod
    def export(self, result: Any, output_path: Union[str, Path], **kwargs) -> Path:
        """Export a result object to a file.
        Args:
            result: Object to export (samples, summary, table or manifest entries)
            output_path (str or Path): Path to save the output file
            **kwargs: Additional exporter-specific parameters
        Returns:
            Path: Path to the exported file
        """
        pass

    @property
    @abstractmethod
    def name(self) -> str:
        pass

    @property
    @abstractmethod
    def extension(self) -> str:
        """File extension (without dot)."""
        pass

    def _target(self, output_path: Union[str, Path]) -> Path:
        output_path = Path(output_path)
        if output_path.suffix.lower() != "." + self.extension:
            output_path = output_path.with_suffix("." + self.extension)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        return output_path
