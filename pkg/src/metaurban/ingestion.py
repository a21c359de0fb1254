"""Reading raw open-data tables and codebooks, and profiling their columns."""

from __future__ import annotations

import csv
import enum
import io
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import EmptyInput, InputError, MalformedHeader, MissingColumn, RaggedRows
from .timestamps import parse_timestamp

log = logging.getLogger(__name__)

DELIMITERS = (",", "\t", ";")
SNIFF_LINES = 20
DEFAULT_SENTINELS = frozenset({"-2", "-9", ""})

_INT = re.compile(r"^[-+]?\d+$")
_NUMBER = re.compile(r"^[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?$")


@dataclass(frozen=True)
class RawTable:
    source_name: str
    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]

    def __post_init__(self) -> None:
        for i, row in enumerate(self.rows):
            if len(row) != len(self.header):
                raise RaggedRows(i + 2, len(self.header), len(row))
        for name in self.header:
            if not name.strip():
                raise MalformedHeader("header contains an empty column name")

    @property
    def row_count(self) -> int:
        return len(self.rows)

    def index(self, column: str) -> int:
        try:
            return self.header.index(column)
        except ValueError:
            raise MissingColumn(column) from None

    def column(self, column: str) -> list[str]:
        idx = self.index(column)
        return [row[idx] for row in self.rows]

    def head(self, n: int) -> RawTable:
        return RawTable(self.source_name, self.header, self.rows[:n])

    def to_text(self, delimiter: str = ",") -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
        writer.writerow(self.header)
        writer.writerows(self.rows)
        return buf.getvalue()


def _decode(data: bytes) -> str:
    try:
        return data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise InputError(f"input is not valid UTF-8: {exc}") from None


def detect_delimiter(lines: Sequence[str]) -> str:
    """Pick the delimiter that splits the header and agrees best with it.

    Candidates are scored over the first lines by (header has several
    columns, share of rows with the header's width, header width).
    """
    sample = [ln for ln in lines[:SNIFF_LINES] if ln.strip()]
    best, best_score = ",", (False, 0.0, 0)
    for delim in DELIMITERS:
        counts = [len(r) for r in csv.reader(sample, delimiter=delim)]
        if not counts:
            continue
        width = counts[0]
        score = (width > 1, sum(c == width for c in counts) / len(counts), width)
        if score > best_score:
            best, best_score = delim, score
    return best


_LEADING_BLANK_LINES = re.compile(r"\A(?:[ \t]*\r?\n)+")
_TRAILING_BLANK_LINES = re.compile(r"(?:\r?\n[ \t]*)+\Z")


def read_table(data: bytes, source_name: str) -> RawTable:
    text = _TRAILING_BLANK_LINES.sub("", _LEADING_BLANK_LINES.sub("", _decode(data)))
    if not text.strip():
        raise EmptyInput(f"{source_name}: no content")
    delim = detect_delimiter(text.split("\n"))

    reader = csv.reader(io.StringIO(text + "\n", newline=""), delimiter=delim)
    try:
        header_row = next(reader)
    except StopIteration:
        raise EmptyInput(f"{source_name}: no header") from None
    header = tuple(h.strip() for h in header_row)
    if any(not h for h in header):
        raise MalformedHeader(f"{source_name}: empty column name in header")
    if len(set(header)) != len(header):
        dupes = sorted({h for h in header if header.count(h) > 1})
        raise MalformedHeader(f"{source_name}: duplicate column names {dupes}")

    rows = []
    for row in reader:
        if not row and len(header) == 1:
            row = [""]
        if len(row) != len(header):
            raise RaggedRows(reader.line_num, len(header), len(row))
        rows.append(tuple(row))
    return RawTable(source_name, header, tuple(rows))


def read_table_file(path: str | Path) -> RawTable:
    path = Path(path)
    return read_table(path.read_bytes(), path.stem)


# -- codebooks --------------------------------------------------------------


@dataclass(frozen=True)
class CodebookEntry:
    label: str = ""
    decodes: dict[str, str] = field(default_factory=dict)
    units: str | None = None


@dataclass(frozen=True)
class Codebook:
    entries: dict[str, CodebookEntry]

    def label(self, variable: str) -> str:
        entry = self.entries.get(variable)
        return entry.label if entry else ""

    def decode(self, variable: str, code: str) -> str | None:
        entry = self.entries.get(variable)
        return entry.decodes.get(code) if entry else None


_VARIABLE_COLS = ("variable", "variable name", "var", "name", "column", "field")
_LABEL_COLS = ("label", "variable label", "description", "question")
_CODE_COLS = ("code", "value code", "codes")
_MEANING_COLS = ("meaning", "value label", "value description", "code description")
_UNIT_COLS = ("units", "unit")


def _find(header: Sequence[str], names: Iterable[str]) -> int | None:
    lowered = [h.strip().casefold() for h in header]
    for name in names:
        if name in lowered:
            return lowered.index(name)
    return None


def read_codebook(data: bytes, source_name: str = "codebook") -> Codebook:
    """Parse a delimited codebook.

    Recognized layouts are (variable, code, meaning) and (variable, label),
    optionally with a units column; a blank variable cell continues the
    previous variable. Unrecognized headers fall back to treating the
    first two columns as variable and label.
    """
    table = read_table(data, source_name)
    var_i = _find(table.header, _VARIABLE_COLS)
    label_i = _find(table.header, _LABEL_COLS)
    code_i = _find(table.header, _CODE_COLS)
    meaning_i = _find(table.header, _MEANING_COLS)
    unit_i = _find(table.header, _UNIT_COLS)
    if var_i is None:
        log.warning("%s: unrecognized codebook layout %s; reading label-only entries", source_name, table.header)
        var_i, label_i, code_i, meaning_i, unit_i = 0, (1 if len(table.header) > 1 else None), None, None, None

    labels: dict[str, str] = {}
    decodes: dict[str, dict[str, str]] = {}
    units: dict[str, str] = {}
    current = None
    for row in table.rows:
        name = row[var_i].strip()
        if name:
            current = name
        if current is None:
            continue
        labels.setdefault(current, "")
        decodes.setdefault(current, {})
        if label_i is not None and row[label_i].strip() and not labels[current]:
            labels[current] = row[label_i].strip()
        if code_i is not None and meaning_i is not None and row[code_i].strip():
            decodes[current][row[code_i].strip()] = row[meaning_i].strip()
        if unit_i is not None and row[unit_i].strip():
            units[current] = row[unit_i].strip()
    return Codebook(
        {name: CodebookEntry(labels[name], decodes[name], units.get(name)) for name in labels}
    )


def read_codebook_file(path: str | Path) -> Codebook:
    path = Path(path)
    return read_codebook(path.read_bytes(), path.stem)


# -- profiling --------------------------------------------------------------


class ColumnKind(enum.Enum):
    IDENTIFIER = "Identifier"
    TIMESTAMP = "Timestamp"
    NUMERIC = "Numeric"
    CATEGORICAL = "Categorical"
    TEXT = "Text"


@dataclass(frozen=True)
class ColumnProfile:
    name: str
    kind: ColumnKind
    distinct_count: int
    sentinel_count: int
    samples: tuple[str, ...]


def _infer_kind(name: str, cells: Sequence[str]) -> ColumnKind:
    if not cells:
        return ColumnKind.TEXT
    stripped = [c.strip() for c in cells]
    if re.search("id", name, re.IGNORECASE) and all(_INT.match(c) for c in stripped):
        ints = [int(c) for c in stripped]
        if all(a < b for a, b in zip(ints, ints[1:])):
            return ColumnKind.IDENTIFIER
    n = len(stripped)
    if sum(parse_timestamp(c) is not None for c in stripped) >= 0.95 * n:
        return ColumnKind.TIMESTAMP
    if sum(bool(_NUMBER.match(c)) for c in stripped) >= 0.95 * n:
        return ColumnKind.NUMERIC
    distinct = len(set(stripped))
    if distinct / n <= 0.2 and distinct <= 50:
        return ColumnKind.CATEGORICAL
    return ColumnKind.TEXT


def profile_column(name: str, cells: Sequence[str], sentinels: frozenset[str] = DEFAULT_SENTINELS) -> ColumnProfile:
    voting = [c for c in cells if c.strip() not in sentinels]
    samples: list[str] = []
    for c in voting:
        if c not in samples:
            samples.append(c)
            if len(samples) == 5:
                break
    return ColumnProfile(
        name=name,
        kind=_infer_kind(name, voting),
        distinct_count=len(set(cells)),
        sentinel_count=len(cells) - len(voting),
        samples=tuple(samples),
    )


def profile_columns(table: RawTable, sentinels: Iterable[str] = DEFAULT_SENTINELS) -> list[ColumnProfile]:
    if not table.header:
        raise MalformedHeader("table has no columns")
    sentinel_set = frozenset(s.strip() for s in sentinels)
    return [profile_column(name, table.column(name), sentinel_set) for name in table.header]


class KeyKind(enum.Enum):
    TIMESTAMP = "timestamp"
    ID = "ID"


@dataclass(frozen=True)
class KeyColumn:
    name: str
    kind: KeyKind
    promoted: bool = False  # leftmost column used for lack of a better key


def detect_key_column(profiles: Sequence[ColumnProfile]) -> KeyColumn:
    if not profiles:
        raise MalformedHeader("no columns to choose a key from")
    for p in profiles:
        if p.kind is ColumnKind.TIMESTAMP:
            return KeyColumn(p.name, KeyKind.TIMESTAMP)
    for p in profiles:
        if p.kind is ColumnKind.IDENTIFIER:
            return KeyColumn(p.name, KeyKind.ID)
    log.warning("no timestamp or identifier column; using leftmost column %r as ID key", profiles[0].name)
    return KeyColumn(profiles[0].name, KeyKind.ID, promoted=True)


@dataclass(frozen=True)
class RawDataset:
    """A data table ("File 1") with its optional codebook ("File 2")."""

    table: RawTable
    codebook: Codebook | None = None
    sentinels: frozenset[str] = DEFAULT_SENTINELS

    def profiles(self) -> list[ColumnProfile]:
        return profile_columns(self.table, self.sentinels)

    def key(self) -> KeyColumn:
        return detect_key_column(self.profiles())
