"""Deterministic, rule-driven alignment.

A :class:`RuleSet` maps schema fields to extractors that read the raw
dataset: constants, column-name lists, facts derived from the key column,
codebook label searches and coverage built from geography columns. Fields
without a rule take the catalog default when there is one.
"""

from __future__ import annotations

import fnmatch
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Literal, Union

from ..coverage import parse_coverage
from ..errors import EmptyCoverage, MalformedGeometry, MalformedListLiteral, RuleTargetMissing
from ..ingestion import ColumnKind, ColumnProfile, KeyColumn, KeyKind, RawDataset, detect_key_column
from ..schema import MetadataDocument, SchemaCategory, builtin_schema
from ..timestamps import CANONICAL_PATTERN, infer_step, parse_all
from ..values import (
    NOT_APPLICABLE,
    Boolean,
    Coverage,
    FieldValue,
    Interval,
    Text,
    TextList,
    TimeInterval,
    TimestampFormat,
    parse_cell,
)
from .core import AlignmentResult, RuleBased, finish


@dataclass(frozen=True)
class ConstantValue:
    value: str


@dataclass(frozen=True)
class ColumnNameList:
    """Column names matching *include* globs and not *exclude* globs, in table order.

    Identifier columns and the key column are always skipped; *kinds*
    further restricts by inferred column kind.
    """

    include: tuple[str, ...] = ("*",)
    exclude: tuple[str, ...] = ()
    kinds: frozenset[ColumnKind] | None = None


@dataclass(frozen=True)
class KeyKindDerived:
    quantity: Literal["timeseries", "timestamp_format", "constant_interval", "time_interval"]


@dataclass(frozen=True)
class CodebookLookup:
    """Columns whose codebook label matches *label_pattern* (regex, case-insensitive)."""

    label_pattern: str


@dataclass(frozen=True)
class CoverageFromColumns:
    """Distinct values of geography columns, first-appearance order.

    ``labelled`` renders ``Regions: [3 4 1 2], Census divisions: [5 9]``;
    ``mapping`` renders ``{'Region': ['WEST', 'SOUTH']}``.
    """

    columns: tuple[tuple[str, str], ...]  # (label, column)
    style: Literal["labelled", "mapping"] = "labelled"


Extractor = Union[ConstantValue, ColumnNameList, KeyKindDerived, CodebookLookup, CoverageFromColumns]


@dataclass(frozen=True)
class FieldRule:
    target: str
    extractor: Extractor


@dataclass(frozen=True)
class RuleSet:
    id: str
    category: SchemaCategory
    rules: tuple[FieldRule, ...]

    def __post_init__(self) -> None:
        schema = builtin_schema(self.category)
        seen = set()
        for rule in self.rules:
            spec = schema.lookup(rule.target)
            if spec is None or spec.canonical_name != rule.target:
                raise RuleTargetMissing(f"rule set {self.id!r}: {rule.target!r} is not a field of {self.category}")
            if rule.target in seen:
                raise ValueError(f"rule set {self.id!r}: field {rule.target!r} has two rules")
            seen.add(rule.target)


class _Context:
    def __init__(self, dataset: RawDataset) -> None:
        self.dataset = dataset
        self.table = dataset.table
        self.profiles: list[ColumnProfile] = dataset.profiles()
        self.key: KeyColumn = detect_key_column(self.profiles)

    @cached_property
    def step(self) -> tuple[float, str] | None:
        if self.key.kind is not KeyKind.TIMESTAMP:
            return None
        moments = parse_all(c for c in self.table.column(self.key.name) if c.strip())
        return infer_step(moments) if moments else None

    def distinct(self, column: str) -> list[str]:
        out: list[str] = []
        for cell in self.table.column(column):
            cell = cell.strip()
            if cell not in self.dataset.sentinels and cell not in out:
                out.append(cell)
        return out


def _extract(ext: Extractor, ctx: _Context, kind) -> FieldValue:
    if isinstance(ext, ConstantValue):
        try:
            return parse_cell(kind, ext.value)
        except MalformedListLiteral:
            return Text(ext.value)

    if isinstance(ext, ColumnNameList):
        names = []
        for prof in ctx.profiles:
            if prof.kind is ColumnKind.IDENTIFIER or prof.name == ctx.key.name:
                continue
            if ext.kinds is not None and prof.kind not in ext.kinds:
                continue
            if not any(fnmatch.fnmatchcase(prof.name, pat) for pat in ext.include):
                continue
            if any(fnmatch.fnmatchcase(prof.name, pat) for pat in ext.exclude):
                continue
            names.append(prof.name)
        return TextList(tuple(names))

    if isinstance(ext, KeyKindDerived):
        is_ts = ctx.key.kind is KeyKind.TIMESTAMP
        if ext.quantity == "timeseries":
            return Boolean(is_ts)
        if ext.quantity == "timestamp_format":
            return TimestampFormat(CANONICAL_PATTERN if is_ts else None)
        step = ctx.step
        if ext.quantity == "constant_interval":
            return Boolean(step is not None)
        if ext.quantity == "time_interval":
            return Interval(TimeInterval(*step) if step else NOT_APPLICABLE)
        raise ValueError(f"unknown derived quantity {ext.quantity!r}")

    if isinstance(ext, CodebookLookup):
        book = ctx.dataset.codebook
        if book is None:
            return TextList()
        pattern = re.compile(ext.label_pattern, re.IGNORECASE)
        return TextList(
            tuple(
                name
                for name in ctx.table.header
                if name != ctx.key.name and pattern.search(book.label(name))
            )
        )

    if isinstance(ext, CoverageFromColumns):
        lists = [(label, ctx.distinct(column)) for label, column in ext.columns]
        if ext.style == "mapping":
            text = "{" + ", ".join(f"{label!r}: {values!r}" for label, values in lists) + "}"
        else:
            text = ", ".join(f"{label}: [{' '.join(values)}]" for label, values in lists)
        try:
            return Coverage(parse_coverage(text))
        except (EmptyCoverage, MalformedGeometry):
            return Text(text)

    raise TypeError(f"unknown extractor {ext!r}")


def align_rule_based(dataset: RawDataset, category: SchemaCategory, rules: RuleSet) -> AlignmentResult:
    """Apply *rules* to *dataset* and return a validated alignment.

    Raises :class:`ProducedInvalidDocument` when the resulting document does
    not validate; that means the rule set is wrong for this data.
    """
    if rules.category is not category:
        raise RuleTargetMissing(f"rule set {rules.id!r} targets {rules.category}, not {category}")
    schema = builtin_schema(category)
    ctx = _Context(dataset)
    warnings: list[str] = []
    if ctx.key.promoted:
        warnings.append(f"no timestamp or identifier column; {ctx.key.name!r} used as ID key")

    values: dict[str, FieldValue] = {}
    for rule in rules.rules:
        values[rule.target] = _extract(rule.extractor, ctx, schema.spec(rule.target).kind)
    for spec in schema:
        if spec.canonical_name in values:
            continue
        if spec.default is not None:
            values[spec.canonical_name] = spec.default
        else:
            warnings.append(f"no rule or default for {spec.canonical_name!r}; field omitted")

    doc = MetadataDocument.build(category, values)
    labels = {}
    if dataset.codebook is not None:
        labels = {name: entry.label for name, entry in dataset.codebook.entries.items()}
    return finish(doc, dataset.table, ctx.key, RuleBased(rules.id), warnings, labels)


# -- bundled rule sets ------------------------------------------------------

_C = SchemaCategory

CBECS = RuleSet(
    "cbecs",
    _C.BUILDING_CHARACTERISTICS,
    (
        FieldRule("Name of Dataset/ Website", ConstantValue("cbecs2018_final_public")),
        FieldRule(
            "Effective coverage",
            CoverageFromColumns((("Regions", "REGION"), ("Census divisions", "CENDIV")), "labelled"),
        ),
        FieldRule("Sample or Probability", ConstantValue("Sample")),
        FieldRule("Building characteristics distribution list", ColumnNameList()),
        FieldRule("Joint distribution list", ConstantValue("[]")),
    ),
)

EIA = RuleSet(
    "eia",
    _C.MACROSCOPIC_ENERGY,
    (
        FieldRule("Name of Dataset/ Website", ConstantValue("U.S. Energy Information Administration")),
        FieldRule("Sector", ConstantValue("Commercial")),
        FieldRule("Timeseries", KeyKindDerived("timeseries")),
        FieldRule("Timestamp format", KeyKindDerived("timestamp_format")),
        FieldRule("Constant Interval", KeyKindDerived("constant_interval")),
        FieldRule("Time interval", KeyKindDerived("time_interval")),
        FieldRule("Effective coverage", ConstantValue("U.S.")),
        FieldRule("Energy Data List", ColumnNameList(kinds=frozenset({ColumnKind.NUMERIC}))),
    ),
)

RECS = RuleSet(
    "recs",
    _C.OCCUPANT_BEHAVIOR,
    (
        FieldRule("Name of Dataset/ Website", ConstantValue("RECS 2020 Public Data")),
        FieldRule("Timestamp format", KeyKindDerived("timestamp_format")),
        FieldRule("Constant Interval?", KeyKindDerived("constant_interval")),
        FieldRule("Time interval", KeyKindDerived("time_interval")),
        FieldRule("Behavior Type", ColumnNameList(include=("*USE*",))),
        FieldRule(
            "Control Action",
            ColumnNameList(include=("WASHTEMP", "SSLIGHT", "SSTEMP", "HEATHOME", "TEMP*", "COOLCNTL")),
        ),
        FieldRule("Behavior Relevant Factors", ColumnNameList(include=("HDD*", "CDD*"))),
        FieldRule(
            "Effective coverage",
            CoverageFromColumns((("Region", "REGIONC"), ("Division", "DIVISION")), "mapping"),
        ),
    ),
)

RULE_SETS: dict[str, RuleSet] = {r.id: r for r in (CBECS, EIA, RECS)}


def get_rule_set(rule_set_id: str) -> RuleSet:
    try:
        return RULE_SETS[rule_set_id.strip().casefold()]
    except KeyError:
        raise KeyError(f"unknown rule set {rule_set_id!r}; bundled: {', '.join(RULE_SETS)}") from None
