"""CSV and JSON Lines writers for sweep rows."""

from __future__ import annotations

import csv
import io
import json
from typing import IO, Iterable, Sequence

from .spec import OutputFormat


def format_value(value) -> str:
    """Shortest text that reads back to the identical value."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "item"):  # numpy scalar
        return format_value(value.item())
    return str(value)


def _plain(value):
    if hasattr(value, "item"):
        return value.item()
    if isinstance(value, (int, float, str, bool)) or value is None:
        return value
    return str(value)


def write_csv(rows: Iterable[dict], sink: IO[str], columns: Sequence[str]) -> int:
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(columns)
    count = 0
    for row in rows:
        writer.writerow([format_value(row[c]) for c in columns])
        count += 1
    return count


def write_jsonl(rows: Iterable[dict], sink: IO[str], columns: Sequence[str]) -> int:
    count = 0
    for row in rows:
        record = {c: _plain(row[c]) for c in columns}
        sink.write(json.dumps(record, allow_nan=False))
        sink.write("\n")
        count += 1
    return count


def emit(rows: Iterable[dict], sink: IO[str], fmt: OutputFormat, columns: Sequence[str]) -> int:
    """Write ``rows`` to ``sink``; returns the number of data rows written."""
    if fmt is OutputFormat.CSV:
        return write_csv(rows, sink, columns)
    return write_jsonl(rows, sink, columns)


def emit_to_path(rows: Iterable[dict], path: str, fmt: OutputFormat, columns: Sequence[str]) -> int:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            return emit(rows, fh, fmt, columns)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}") from exc


def _parse_cell(text: str):
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def read_csv(text: str) -> list[dict]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    return [dict(zip(header, (_parse_cell(c) for c in line))) for line in reader]


def read_jsonl(text: str) -> list[dict]:
    return [json.loads(line) for line in text.splitlines() if line.strip()]
