"""Export modules for hblasso.
This module provides the exporters that write draws, summaries, tables and run manifests.
"""
from typing import Dict

from hblasso.export.base import BaseExporter
from hblasso.export.tables import SamplesExporter, SummaryExporter, TableExporter, read_table
from hblasso.export.manifest import ManifestExporter, read_manifest

_EXPORTERS: Dict[str, BaseExporter] = {
    "samples": SamplesExporter(),
    "summary": SummaryExporter(),
    "table": TableExporter(),
    "manifest": ManifestExporter(),
}


def get_exporter(export_format: str) -> BaseExporter:
    """Get an exporter instance by format.
    Args:
        export_format (str): Type of exporter to get
    Returns:
        BaseExporter: Exporter instance
    Raises:
        ValueError: If the exporter format is not registered
    """
    if export_format not in _EXPORTERS:
        raise ValueError(f"Unknown export format: {export_format}. "
                         f"Available formats: {list(_EXPORTERS.keys())}")
    return _EXPORTERS[export_format]


def register_exporter(export_format: str, exporter_instance: BaseExporter):
    """Register a new exporter format.
    Args:
        export_format (str): Format name to register
        exporter_instance (BaseExporter): Exporter instance to register
    """
    _EXPORTERS[export_format] = exporter_instance


__all__ = [
    "get_exporter", "register_exporter", "BaseExporter",
    "TableExporter", "SamplesExporter", "SummaryExporter", "ManifestExporter",
    "read_table", "read_manifest",
]
