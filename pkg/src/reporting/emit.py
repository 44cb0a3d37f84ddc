"""CSV and JSON writers with a one-line metadata header."""

import csv
import json
import sys
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel

from .. import __version__
from ..config import config
from ..errors import ConfigError
from ..models import Table


def format_value(value: Any) -> str:
    """Floats with the configured number of significant digits; everything else as str."""
    if isinstance(value, float):
        return format(value, f".{config.output.significant_digits}g")
    if value is None:
        return ""
    return str(value)


def metadata_line(command: str, seed: Optional[int]) -> str:
    return f"# levy-mixtures {__version__} command={command} seed={seed}"


def _write(text: str, path: Optional[Path]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc}") from exc


class _Buffer(list):
    def write(self, chunk: str) -> None:
        self.append(chunk)


def render_table(table: Table, command: str, seed: Optional[int] = None) -> str:
    """CSV text: optional metadata comment, header row, formatted rows."""
    buffer = _Buffer()
    if config.output.metadata_header:
        buffer.write(metadata_line(command, seed) + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.header)
    for row in table.rows:
        writer.writerow([format_value(v) for v in row])
    return "".join(buffer)


def write_table(table: Table, path: Optional[Path], command: str, seed: Optional[int] = None) -> None:
    """Write a table as CSV to `path`, or to stdout when no path is given."""
    _write(render_table(table, command, seed), path)


def write_json(payload: BaseModel | dict, path: Optional[Path]) -> None:
    """Write a record as indented JSON (stdout when no path is given)."""
    data = payload.model_dump(mode="json") if isinstance(payload, BaseModel) else payload
    _write(json.dumps(data, indent=2) + "\n", path)
