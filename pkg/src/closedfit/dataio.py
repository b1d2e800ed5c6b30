"""Dataset ingestion and report serialization.

Input is UTF-8 CSV, single-column or named-column with a header; ingestion
errors carry 1-based file line numbers.  Reports are CSV by default with a
JSON mirror of the same schema.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import List, Mapping, Optional, Sequence

from .errors import DataError
from .model import UNIT_INTERVAL, Sample, positive_sample, unit_sample

__all__ = [
    "DatasetFile",
    "read_dataset",
    "roraima_farming_path",
    "write_rows_csv",
    "write_rows_json",
    "read_rows_csv",
]


@dataclass(frozen=True)
class DatasetFile:
    path: str
    column: Optional[str]
    sample: Sample


def roraima_farming_path() -> Path:
    """Filesystem path of the bundled farming-proportion dataset."""
    return Path(resources.files("closedfit.data").joinpath("roraima_farming.csv"))


def _is_number(token: str) -> bool:
    try:
        float(token)
    except (TypeError, ValueError):
        return False
    return True


def read_dataset(path, column: Optional[str] = None,
                 domain: str = UNIT_INTERVAL) -> DatasetFile:
    """Parse a CSV file into a validated Sample.

    Picks the requested column, or the single numeric column when none is
    given.  Values outside the open support are rejected with the offending
    line number.
    """
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [(lineno, row) for lineno, row in enumerate(csv.reader(fh), start=1)
                    if any(cell.strip() for cell in row)]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise DataError(f"{path}: no observations")

    first = [cell.strip() for cell in rows[0][1]]
    has_header = not all(_is_number(c) for c in first if c != "")
    header = first if has_header else None
    data_rows = rows[1:] if has_header else rows
    if not data_rows:
        raise DataError(f"{path}: no observations")

    if column is not None:
        if header is None or column not in header:
            available = ", ".join(header) if header else "(file has no header)"
            raise DataError(f"{path}: column {column!r} not found; available: {available}")
        idx = header.index(column)
    else:
        probe = [cell.strip() for cell in data_rows[0][1]]
        numeric = [i for i, cell in enumerate(probe) if _is_number(cell)]
        if len(numeric) == 0:
            raise DataError(f"{path}: no numeric column found")
        if len(numeric) > 1:
            raise DataError(
                f"{path}: several numeric columns; select one with --column")
        idx = numeric[0]
        column = header[idx] if header else None

    low, high = (0.0, 1.0) if domain == UNIT_INTERVAL else (0.0, None)
    values: List[float] = []
    for lineno, row in data_rows:
        if idx >= len(row):
            raise DataError(f"{path}, line {lineno}: missing value")
        token = row[idx].strip()
        if not _is_number(token):
            raise DataError(f"{path}, line {lineno}: not a number: {token!r}")
        v = float(token)
        if v <= low or (high is not None and v >= high):
            support = "(0,1)" if domain == UNIT_INTERVAL else "(0,inf)"
            raise DataError(
                f"{path}, line {lineno}: value {token} outside the open support {support}")
        values.append(v)
    if not values:
        raise DataError(f"{path}: no observations")

    build = unit_sample if domain == UNIT_INTERVAL else positive_sample
    return DatasetFile(str(path), column, build(values))


def _format_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_rows_csv(rows: Sequence[Mapping], fieldnames: Sequence[str], path,
                   float_format: Optional[str] = None) -> None:
    """Write mappings as CSV; floats use repr (exact round trip) unless a
    format string is given."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(fieldnames)
        for row in rows:
            out = []
            for name in fieldnames:
                v = row.get(name)
                if float_format is not None and isinstance(v, float):
                    out.append(float_format % v)
                else:
                    out.append(_format_cell(v))
            writer.writerow(out)


def write_rows_json(rows: Sequence[Mapping], fieldnames: Sequence[str], path) -> None:
    payload = [{name: row.get(name) for name in fieldnames} for row in rows]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, allow_nan=True)
        fh.write("\n")


def read_rows_csv(path) -> List[dict]:
    """Re-parse a report CSV, converting numeric cells back to floats."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        out = []
        for row in reader:
            parsed = {}
            for key, val in row.items():
                if val is None or val == "":
                    parsed[key] = None
                elif _is_number(val):
                    parsed[key] = float(val)
                else:
                    parsed[key] = val
            out.append(parsed)
        return out
