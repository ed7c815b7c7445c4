import csv
import io
import json
import logging
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np

from vilenkin_lab.core.function_space import StepFunction
from vilenkin_lab.core.group import GroupConfig
from vilenkin_lab.core.transform import SpectrumTable
from vilenkin_lab.errors import ConfigError, FormatError

logger = logging.getLogger(__name__)


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


def _header(cfg: GroupConfig, extra: Optional[Dict[str, Any]] = None) -> str:
    parts = [cfg.header()]
    parts.extend(f"{k}={v}" for k, v in (extra or {}).items())
    return ";".join(parts)


def dump_values(cfg: GroupConfig, values: np.ndarray, extra: Optional[Dict[str, Any]] = None) -> str:
    """Header line, then ``index,re,im`` per coset."""
    lines = [_header(cfg, extra)]
    lines.extend(f"{i},{v.real!r},{v.imag!r}" for i, v in enumerate(np.asarray(values, dtype=complex).tolist()))
    return "\n".join(lines) + "\n"


def dump_function(obj: Union[StepFunction, SpectrumTable], extra: Optional[Dict[str, Any]] = None) -> str:
    if isinstance(obj, SpectrumTable):
        return dump_values(obj.cfg, obj.coefficients, {"kind": "spectrum", **(extra or {})})
    return dump_values(obj.cfg, obj.values, {"kind": "step", **(extra or {})})


def load_function(text: str) -> Union[StepFunction, SpectrumTable]:
    """
    Parse the ``index,re,im`` format back into a StepFunction, or a
    SpectrumTable when the header says ``kind=spectrum``.

    Raises:
        FormatError: malformed header or rows, duplicate or missing indices
    """
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise FormatError("empty input")
    header = lines[0]
    try:
        cfg = GroupConfig.from_header(header)
    except ConfigError as e:
        raise FormatError(str(e)) from e
    fields = dict(part.split("=", 1) for part in header.lstrip("#").strip().split(";") if "=" in part)
    values = np.full(cfg.size, np.nan, dtype=complex)
    for lineno, line in enumerate(lines[1:], start=2):
        try:
            index, re, im = line.split(",")
            index = int(index)
            if not 0 <= index < cfg.size:
                raise IndexError(index)
            value = complex(float(re), float(im))
        except (ValueError, IndexError) as e:
            raise FormatError(f"line {lineno}: expected index,re,im, got {line!r}") from e
        if not np.isnan(values[index]):
            raise FormatError(f"line {lineno}: index {index} appears twice")
        values[index] = value
    if np.any(np.isnan(values)):
        raise FormatError(f"expected {cfg.size} rows, some indices are missing")
    if fields.get("kind", "step").strip() == "spectrum":
        return SpectrumTable(cfg, values)
    return StepFunction(cfg, values)


def read_function(path: Union[str, Path]) -> Union[StepFunction, SpectrumTable]:
    logger.info("reading %s", path)
    return load_function(Path(path).read_text(encoding="utf-8"))


def format_records(
    records: List[Dict[str, Any]],
    cfg: GroupConfig,
    fmt: OutputFormat = OutputFormat.CSV,
    extra: Optional[Dict[str, Any]] = None,
) -> str:
    """CSV with a ``# radix=..`` comment line, or JSON ``{"config", "records"}``."""
    fmt = OutputFormat(fmt)
    if fmt == OutputFormat.JSON:
        config = {"radix": list(cfg.radix), "N": cfg.resolution, **(extra or {})}
        return json.dumps({"config": config, "records": records}, indent=2, default=str) + "\n"
    buffer = io.StringIO()
    buffer.write(f"# {_header(cfg, extra)}\n")
    if records:
        writer = csv.DictWriter(buffer, fieldnames=list(records[0].keys()), lineterminator="\n")
        writer.writeheader()
        for record in records:
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in record.items()})
    return buffer.getvalue()


def write_text(text: str, path: Union[str, Path]) -> None:
    Path(path).write_text(text, encoding="utf-8")
    logger.info("wrote %s", path)
