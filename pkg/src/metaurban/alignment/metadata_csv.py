"""Reading metadata.csv text back into a document.

Tolerates what models and spreadsheets tend to produce: comma or tab
delimiters, an optional ``Field,Value`` header, trailing colons on field
names, unquoted commas in the value cell, and list fields spread over
continuation rows whose first cell is empty.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass

from ..errors import UnknownField, UnresolvableCategory
from ..schema import SCHEMA_CATEGORIES, MetadataDocument, SchemaCategory, builtin_schema
from ..values import KindTag, TextList, parse_cell

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParsedMetadata:
    document: MetadataDocument
    unknown_fields: tuple[str, ...] = ()
    duplicate_fields: tuple[str, ...] = ()


def _rows(text: str) -> list[tuple[str, list[str]]]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    delimiter = "\t" if lines and all("\t" in ln for ln in lines) else ","
    rows: list[tuple[str, list[str]]] = []
    records = (r for r in csv.reader(io.StringIO(text.lstrip("\ufeff"), newline=""), delimiter=delimiter) if r)
    for i, row in enumerate(records):
        name = row[0].strip()
        value = delimiter.join(row[1:]) if len(row) > 1 else ""
        if i == 0 and name.casefold() == "field" and value.strip().casefold() == "value":
            continue
        if not name and rows:
            rows[-1][1].append(value)
            continue
        rows.append((name, [value]))
    return rows


def infer_category(names: list[str], declared: SchemaCategory | None = None) -> SchemaCategory:
    """Category whose catalog recognizes the most field names; *declared* breaks ties."""
    scores = {
        cat: sum(builtin_schema(cat).lookup(n) is not None for n in names if n) for cat in SCHEMA_CATEGORIES
    }
    best = max(scores.values(), default=0)
    if best == 0:
        raise UnresolvableCategory("no recognizable schema fields in metadata")
    leaders = [cat for cat, score in scores.items() if score == best]
    if len(leaders) == 1:
        return leaders[0]
    if declared in leaders:
        return declared
    raise UnresolvableCategory(
        f"field names fit {', '.join(str(c) for c in leaders)} equally well; pass a category to disambiguate"
    )


def parse_metadata(text: str, category: SchemaCategory | None = None) -> ParsedMetadata:
    if not text.strip():
        raise UnresolvableCategory("metadata text is empty")
    rows = _rows(text)
    cat = infer_category([name for name, _ in rows], category)
    schema = builtin_schema(cat)

    values = {}
    unknown: list[str] = []
    dupes: list[str] = []
    for name, cells in rows:
        spec = schema.lookup(name) if name else None
        if spec is None:
            unknown.append(name)
            log.warning("%s", UnknownField(cat, name))
            continue
        if spec.canonical_name in values:
            dupes.append(spec.canonical_name)
            log.warning("field %r appears more than once; keeping the first", spec.canonical_name)
            continue
        if len(cells) > 1 and spec.kind.tag is KindTag.TEXT_LIST:
            items: list[str] = []
            for cell in cells:
                if cell.strip().startswith("["):
                    items.extend(parse_cell(spec.kind, cell).items)  # type: ignore[union-attr]
                elif cell.strip():
                    items.append(cell.strip())
            values[spec.canonical_name] = TextList(tuple(items))
        else:
            values[spec.canonical_name] = parse_cell(spec.kind, "\n".join(cells))
    doc = MetadataDocument.build(cat, values)
    return ParsedMetadata(doc, tuple(unknown), tuple(dupes))


def parse_metadata_csv(text: str, category: SchemaCategory | None = None) -> MetadataDocument:
    """Parse metadata.csv text; unknown field names are logged and skipped."""
    return parse_metadata(text, category).document
