"""Writing metadata.csv and the per-variable two-column series files.

Output is UTF-8 without BOM, LF newlines, minimal quoting. Value cells are
copied verbatim so numbers never drift through a float round trip.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Sequence

from .errors import InputError, InvalidDocument, IoFailure, UnparseableTimestamp
from .ingestion import KeyColumn, KeyKind, RawTable
from .schema import TIMESTAMP, MetadataDocument
from .timestamps import check_timestamp_sample, format_timestamp, parse_timestamp
from .validation import validate_document
from .values import TimestampFormat, format_cell

if TYPE_CHECKING:
    from .alignment.core import AlignmentResult

METADATA_FILE = "metadata.csv"
METADATA_HEADER = ("Field", "Value")


def _csv_bytes(rows: Sequence[Sequence[str]]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerows(rows)
    return buf.getvalue().encode("utf-8")


def write_metadata_csv(doc: MetadataDocument) -> bytes:
    report = validate_document(doc)
    if not report.valid():
        raise InvalidDocument(report)
    rows = [METADATA_HEADER]
    rows.extend((name, format_cell(value)) for name, value in doc.entries)
    return _csv_bytes(rows)


@dataclass(frozen=True)
class ProcessedSeries:
    key_kind: KeyKind
    variable: str
    rows: tuple[tuple[str, str], ...]

    @property
    def header(self) -> tuple[str, str]:
        return ("timestamp" if self.key_kind is KeyKind.TIMESTAMP else "ID", self.variable)

    def to_csv(self) -> bytes:
        return _csv_bytes([self.header, *self.rows])


def _render_key(cell: str, row: int, pattern: str) -> str:
    if check_timestamp_sample(pattern, cell):
        return cell
    moment = parse_timestamp(cell)
    if moment is None:
        raise UnparseableTimestamp(row, cell, pattern)
    rendered = format_timestamp(moment, pattern)
    if not check_timestamp_sample(pattern, rendered):
        raise UnparseableTimestamp(row, cell, pattern)
    return rendered


def emit_series(table: RawTable, key: KeyColumn, variable: str, timestamp_format: str | None = None) -> ProcessedSeries:
    """Project the key column and *variable* into a two-column series.

    Rows keep source order and count. Timestamp keys are re-rendered in
    *timestamp_format* when one is given; value cells pass through as-is.
    """
    key_idx = table.index(key.name)
    var_idx = table.index(variable)
    rows = []
    for n, row in enumerate(table.rows, start=1):
        cell = row[key_idx]
        if not cell.strip():
            raise InputError(f"row {n}: empty key cell in column {key.name!r}")
        if key.kind is KeyKind.TIMESTAMP and timestamp_format:
            cell = _render_key(cell.strip(), n, timestamp_format)
        rows.append((cell, row[var_idx]))
    return ProcessedSeries(key.kind, variable, tuple(rows))


def sanitize_label(label: str) -> str:
    return re.sub(r"[^0-9A-Za-z]", "_", label) or "_"


def emit_all(result: AlignmentResult, table: RawTable, out_dir: str | Path) -> list[str]:
    """Write metadata.csv plus one file per plan entry; return file names in plan order."""
    out = Path(out_dir)
    fmt_value = result.document.as_dict().get(TIMESTAMP)
    pattern = fmt_value.pattern if isinstance(fmt_value, TimestampFormat) else None

    payloads: list[tuple[str, bytes]] = [(METADATA_FILE, write_metadata_csv(result.document))]
    taken = {METADATA_FILE.casefold()}
    for entry in result.plan:
        key = KeyColumn(entry.key_column, entry.key_kind)
        series = emit_series(table, key, entry.source_column, pattern)
        if entry.label != entry.source_column:
            series = ProcessedSeries(series.key_kind, entry.label, series.rows)
        stem = sanitize_label(entry.label)
        name = f"{stem}.csv"
        suffix = 2
        while name.casefold() in taken:
            name = f"{stem}_{suffix}.csv"
            suffix += 1
        taken.add(name.casefold())
        payloads.append((name, series.to_csv()))

    try:
        out.mkdir(parents=True, exist_ok=True)
        for name, data in payloads:
            (out / name).write_bytes(data)
    except OSError as exc:
        raise IoFailure(out, exc.strerror or str(exc)) from exc
    return [name for name, _ in payloads]
