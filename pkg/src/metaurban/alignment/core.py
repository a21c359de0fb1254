from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Union

from ..errors import ProducedInvalidDocument
from ..ingestion import KeyColumn, KeyKind, RawTable
from ..schema import VARIABLE_LIST_FIELDS, MetadataDocument
from ..validation import ValidationReport, validate_document
from ..values import TextList

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PlanEntry:
    """One variable to extract as a two-column series."""

    label: str
    source_column: str
    key_column: str
    key_kind: KeyKind


@dataclass(frozen=True)
class RuleBased:
    rule_set_id: str


@dataclass(frozen=True)
class Llm:
    model_id: str
    prompt_digest: str


Provenance = Union[RuleBased, Llm]


def variable_labels(doc: MetadataDocument) -> list[str]:
    labels: list[str] = []
    values = doc.as_dict()
    for name in VARIABLE_LIST_FIELDS.get(doc.category, ()):
        value = values.get(name)
        if isinstance(value, TextList):
            labels.extend(value.items)
    return labels


@dataclass(frozen=True)
class AlignmentResult:
    document: MetadataDocument
    plan: tuple[PlanEntry, ...]
    provenance: Provenance
    report: ValidationReport
    warnings: tuple[str, ...] = ()
    # (column, codebook label) pairs for planned variables
    annotations: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        labels = set(variable_labels(self.document))
        for entry in self.plan:
            if entry.label not in labels:
                raise ValueError(f"plan label {entry.label!r} is not listed in the document")


def build_plan(doc: MetadataDocument, table: RawTable, key: KeyColumn) -> tuple[tuple[PlanEntry, ...], list[str]]:
    """One entry per listed variable that names a table column, in list order."""
    plan: list[PlanEntry] = []
    warnings: list[str] = []
    seen: set[str] = set()
    for label in variable_labels(doc):
        if label in seen or label == key.name:
            continue
        seen.add(label)
        if label not in table.header:
            warnings.append(f"listed variable {label!r} is not a column of {table.source_name}; not extracted")
            continue
        plan.append(PlanEntry(label, label, key.name, key.kind))
    return tuple(plan), warnings


def finish(
    doc: MetadataDocument,
    table: RawTable,
    key: KeyColumn,
    provenance: Provenance,
    warnings: list[str],
    annotations: dict[str, str] | None = None,
) -> AlignmentResult:
    """Validate *doc*, build its extraction plan and wrap everything up.

    Raises :class:`ProducedInvalidDocument` if validation finds errors.
    """
    samples = table.column(key.name)[:5] if key.kind is KeyKind.TIMESTAMP else []
    report = validate_document(doc, samples)
    if not report.valid():
        raise ProducedInvalidDocument(report)
    plan, plan_warnings = build_plan(doc, table, key)
    all_warnings = [*warnings, *plan_warnings, *(f"{f.rule} {f.field}: {f.message}" for f in report.warnings)]
    for w in all_warnings:
        log.warning(w)
    notes = annotations or {}
    return AlignmentResult(
        document=doc,
        plan=plan,
        provenance=provenance,
        report=report,
        warnings=tuple(all_warnings),
        annotations=tuple((e.source_column, notes[e.source_column]) for e in plan if notes.get(e.source_column)),
    )
