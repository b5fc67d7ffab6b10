"""Reading, writing and schema-sniffing for the two supported data formats:
CSV with a header row, and JSONL. Everything is UTF-8 without a BOM."""

from __future__ import annotations

import csv
import io
import json
import re
from pathlib import Path
from typing import Any, Iterable, Sequence

from govdag.core.types import ColumnInfo, SchemaDescriptor
from govdag.errors import DataFileError

_DATETIME_PATTERNS = (
    re.compile(r"\d{4}-\d{2}-\d{2}([T ]\d{2}:\d{2}(:\d{2})?(\.\d+)?(Z|[+-]\d{2}:\d{2})?)?"),
    re.compile(r"\d{2}/\d{2}/\d{4}"),
    re.compile(r"\d{4}/\d{2}/\d{2}"),
)

_BOOL_TOKENS = {"true", "false"}


def detect_format(path: str | Path) -> str:
    suffix = Path(path).suffix.lower()
    if suffix == ".csv":
        return "csv"
    if suffix == ".jsonl":
        return "jsonl"
    raise DataFileError(f"unsupported data file extension: {path}")


def _read_text(path: str | Path) -> str:
    raw = Path(path).read_bytes()
    if raw.startswith(b"\xef\xbb\xbf"):
        raise DataFileError(f"{path}: byte-order mark found; data files must be UTF-8 without BOM")
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DataFileError(f"{path}: not valid UTF-8: {exc}") from exc


def read_rows(path: str | Path) -> tuple[list[str], list[dict[str, Any]]]:
    """Load a data file into (header, rows).

    CSV cells are strings with '' meaning null; JSONL rows keep their JSON
    types with None/absent meaning null. The header preserves first-seen
    column order.
    """
    fmt = detect_format(path)
    text = _read_text(path)
    if fmt == "csv":
        reader = csv.reader(io.StringIO(text))
        try:
            header = next(reader)
        except StopIteration:
            return [], []
        rows = []
        for lineno, values in enumerate(reader, start=2):
            if len(values) != len(header):
                raise DataFileError(f"{path}:{lineno}: expected {len(header)} cells, got {len(values)}")
            rows.append(dict(zip(header, values)))
        return list(header), rows

    header_order: list[str] = []
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataFileError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise DataFileError(f"{path}:{lineno}: JSONL record must be an object")
        for key in obj:
            if key not in header_order:
                header_order.append(key)
        rows.append(obj)
    return header_order, rows


def write_rows(
    path: str | Path,
    header: Sequence[str],
    rows: Iterable[dict[str, Any]],
    fmt: str | None = None,
) -> None:
    fmt = fmt or detect_format(path)
    path = Path(path)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(header))
        for row in rows:
            writer.writerow(["" if row.get(c) is None else row.get(c, "") for c in header])
        path.write_text(buf.getvalue(), encoding="utf-8")
    elif fmt == "jsonl":
        lines = [json.dumps(row, ensure_ascii=False) for row in rows]
        path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
    else:
        raise DataFileError(f"unsupported format {fmt!r}")


def is_null(value: Any) -> bool:
    return value is None or (isinstance(value, str) and value == "")


def sniff_coarse_type(value: Any) -> str:
    """Coarse type of one non-null cell value."""
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, int):
        return "integer"
    if isinstance(value, float):
        return "real"
    text = str(value)
    if text.strip().lower() in _BOOL_TOKENS:
        return "boolean"
    try:
        int(text)
        return "integer"
    except ValueError:
        pass
    try:
        float(text)
        return "real"
    except ValueError:
        pass
    for pattern in _DATETIME_PATTERNS:
        if pattern.fullmatch(text.strip()):
            return "datetime"
    return "string"


def _merge_types(seen: set[str]) -> str:
    if not seen:
        return "string"
    if len(seen) == 1:
        return next(iter(seen))
    if seen <= {"integer", "real"}:
        return "real"
    return "string"


def infer_schema(path: str | Path, max_rows: int = 100) -> SchemaDescriptor:
    """Inspect up to ``max_rows`` rows and derive column names plus coarse
    types (integer, real, string, boolean, datetime)."""
    fmt = detect_format(path)
    header, rows = read_rows(path)
    rows = rows[:max_rows]
    columns = []
    for name in header:
        seen = {sniff_coarse_type(row[name]) for row in rows if name in row and not is_null(row[name])}
        columns.append(ColumnInfo(name=name, coarse_type=_merge_types(seen)))
    return SchemaDescriptor(columns=tuple(columns), file_format=fmt)


def sample_rows(path: str | Path, limit: int = 5) -> list[dict[str, Any]]:
    _, rows = read_rows(path)
    return rows[:limit]


def render_samples(samples: Sequence[dict[str, Any]]) -> str:
    return "\n".join(json.dumps(row, ensure_ascii=False, sort_keys=True) for row in samples)
