from typing import Any, Optional, TextIO, Union

import csv
import hashlib
import io
import json
import math
from collections.abc import Mapping, Sequence
from pathlib import Path

from pydantic import BaseModel

from dkp_spectra import version
from dkp_spectra.constants import CSV_FLOAT_FORMAT, OutputFormat
from dkp_spectra.utils.telemetry import setup_logger

logger = setup_logger(__name__)

Row = Mapping[str, Any]


class OutputHeader(BaseModel):
    """Provenance written ahead of every table."""

    version: str = version
    config_hash: str
    units: str
    norm_convention: str = "none"

    class Config:
        frozen = True

    def comment(self) -> str:
        return (
            f"# dkp-spectra version={self.version} config_hash={self.config_hash} "
            f"units={self.units} norm={self.norm_convention}"
        )


def config_hash(config: Mapping[str, Any]) -> str:
    """
    sha256 of the canonical JSON form of a configuration mapping.

    >>> config_hash({"b": 1, "a": 2}) == config_hash({"a": 2, "b": 1})
    True
    """
    canonical = json.dumps(config, sort_keys=True, default=str, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def format_value(value: Any) -> str:
    """
    Floats in scientific notation with 17 significant digits, everything else as str.

    >>> format_value(0.1)
    '1.0000000000000001e-01'
    >>> format_value(None)
    ''
    """
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return CSV_FLOAT_FORMAT.format(value)
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def _columns(rows: Sequence[Row], columns: Optional[Sequence[str]]) -> list[str]:
    if columns is not None:
        return list(columns)
    names: list[str] = []
    for row in rows:
        for key in row:
            if key not in names:
                names.append(key)
    return names


def render_csv(rows: Sequence[Row], header: OutputHeader, columns: Optional[Sequence[str]] = None) -> str:
    buffer = io.StringIO()
    buffer.write(header.comment() + "\n")
    names = _columns(rows, columns)
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(names)
    for row in rows:
        writer.writerow([format_value(row.get(name)) for name in names])
    return buffer.getvalue()


def _json_value(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if hasattr(value, "value"):
        return value.value
    return value


def render_json(rows: Sequence[Row], header: OutputHeader, columns: Optional[Sequence[str]] = None) -> str:
    names = _columns(rows, columns)
    payload = {
        "header": header.dict(),
        "rows": [{name: _json_value(row.get(name)) for name in names} for row in rows],
    }
    return json.dumps(payload, indent=2, default=str) + "\n"


def render(
    rows: Sequence[Row],
    header: OutputHeader,
    output_format: Union[OutputFormat, str] = OutputFormat.CSV,
    columns: Optional[Sequence[str]] = None,
) -> str:
    if OutputFormat(output_format) is OutputFormat.JSON:
        return render_json(rows, header, columns)
    return render_csv(rows, header, columns)


def write_text(text: str, path: Optional[Union[str, Path]], stream: Optional[TextIO] = None) -> None:
    """Writes to path when given, otherwise to stream."""
    if path is None:
        if stream is not None:
            stream.write(text)
        return
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {len(text)} characters to {target}")
