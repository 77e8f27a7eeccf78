"""Run manifest: one key=value pair per line, sorted by key."""
import logging
import math
from pathlib import Path
from typing import Any, Dict, Mapping, Union

from hblasso.export.base import BaseExporter

logger = logging.getLogger(__name__)


def _format(value: Any) -> str:
    if isinstance(value, bool) or value is None:
        return str(value).lower()
    if isinstance(value, float):
        return "nan" if math.isnan(value) else format(value, ".17g")
    return str(value).replace("\n", " ")


class ManifestExporter(BaseExporter):
    """Exporter for the key=value run manifest."""
    def export(self, result: Mapping[str, Any], output_path: Union[str, Path], **kwargs) -> Path:
        output_path = self._target(output_path)
        for key in result:
            if "=" in str(key) or "\n" in str(key):
                raise ValueError(f"invalid manifest key: {key!r}")
        lines = [f"{key}={_format(result[key])}" for key in sorted(result, key=str)]
        output_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        logger.info("Wrote manifest with %d entries to %s", len(lines), output_path)
        return output_path

    @property
    def name(self) -> str:
        return "manifest"

    @property
    def extension(self) -> str:
        return "txt"


def read_manifest(path: Union[str, Path]) -> Dict[str, str]:
    """Parse a manifest back into a dict of strings."""
    entries = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line:
            key, _, value = line.partition("=")
            entries[key] = value
    return entries
