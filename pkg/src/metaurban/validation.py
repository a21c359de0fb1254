"""Document validation against the category field catalog.

Rules
-----
R1   required field present
R2   value kind matches the field kind (and text values are non-empty)
R3   "Constant Interval" true  <=> "Time interval" is not NaN
R4   every name in a joint-distribution group is in the distribution list
R5   a probability attached to the Probability mode lies in (0, 1)
R6   coordinates within latitude/longitude range
R7   timestamp format uses only YYYY MM DD HH MM SS and separators
R8   enum value is an allowed choice
R9   level of detail is one of LoD1..LoD4
R10  (warning) timestamp samples match the declared format
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Literal

from .schema import (
    CONSTANT,
    CONSTANT_Q,
    DISTRIBUTION_LIST,
    INTERVAL,
    JOINT_LIST,
    LOD,
    SAMPLE_MODE,
    TIMESTAMP,
    MetadataDocument,
)
from .timestamps import check_timestamp_sample, pattern_problem
from .values import (
    Boolean,
    Coordinate,
    EnumChoice,
    Interval,
    PairList,
    Text,
    TextList,
    TimestampFormat,
)

Severity = Literal["Error", "Warning"]
NO_FIELD = "∅"


@dataclass(frozen=True)
class Finding:
    severity: Severity
    field: str
    rule: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    document_id: str
    findings: tuple[Finding, ...]

    @property
    def errors(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity == "Error")

    @property
    def warnings(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity == "Warning")

    def valid(self) -> bool:
        return not self.errors

    def rules(self, severity: Severity | None = None) -> list[str]:
        return [f.rule for f in self.findings if severity is None or f.severity == severity]

    def to_text(self) -> str:
        status = "VALID" if self.valid() else "INVALID"
        lines = [f"{self.document_id}: {status} ({len(self.errors)} errors, {len(self.warnings)} warnings)"]
        for f in self.findings:
            lines.append(f"{f.severity.upper():7} {f.rule:3} {f.field}: {f.message}")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["document", "severity", "field", "rule", "message"])
        for f in self.findings:
            writer.writerow([self.document_id, f.severity, f.field, f.rule, f.message])
        return buf.getvalue()


def _rule_number(rule: str) -> int:
    return int(rule[1:])


def validate_document(doc: MetadataDocument, timestamp_samples: Iterable[str] = ()) -> ValidationReport:
    """Run every rule over *doc* and collect all findings.

    *timestamp_samples* are raw key cells from the source table; when given,
    they are checked against the declared timestamp format (R10, warnings).
    """
    schema = doc.schema  # raises NoSchemaForCategory for the data lake
    values = doc.as_dict()
    found: list[tuple[int, int, Finding]] = []

    def add(pos: int, severity: Severity, name: str, rule: str, message: str) -> None:
        found.append((pos, _rule_number(rule), Finding(severity, name, rule, message)))

    def pos_of(name: str) -> int:
        return schema.position(name)

    for pos, spec in enumerate(schema.fields):
        name = spec.canonical_name
        value = values.get(name)
        if value is None:
            if spec.required:
                add(pos, "Error", name, "R1", "required field is missing")
            continue
        if value.tag is not spec.kind.tag:
            add(pos, "Error", name, "R2", f"expected {spec.kind.tag.value}, got {value.tag.value}")
            continue
        if isinstance(value, Text) and not value.text.strip():
            add(pos, "Error", name, "R2", "empty text value")
            continue
        if isinstance(value, Coordinate):
            lat, lon = value.point.latitude, value.point.longitude
            if not (math.isfinite(lat) and -90 <= lat <= 90):
                add(pos, "Error", name, "R6", f"latitude {lat} outside [-90, 90]")
            if not (math.isfinite(lon) and -180 <= lon <= 180):
                add(pos, "Error", name, "R6", f"longitude {lon} outside [-180, 180]")
        if isinstance(value, TimestampFormat) and value.pattern is not None:
            problem = pattern_problem(value.pattern)
            if problem:
                add(pos, "Error", name, "R7", f"malformed timestamp format {value.pattern!r}: {problem}")
        if isinstance(value, EnumChoice) and value.value not in spec.kind.allowed:
            rule = "R9" if name == LOD else "R8"
            allowed = ", ".join(spec.kind.allowed)
            add(pos, "Error", name, rule, f"{value.value!r} is not one of {allowed}")

    constant_name = CONSTANT if CONSTANT in schema.names else CONSTANT_Q
    constant = values.get(constant_name)
    interval = values.get(INTERVAL)
    if isinstance(constant, Boolean) and isinstance(interval, Interval):
        if constant.flag and interval.interval.not_applicable:
            add(pos_of(INTERVAL), "Error", INTERVAL, "R3", f"{constant_name} is TRUE but the interval is NaN")
        elif not constant.flag and not interval.interval.not_applicable:
            add(
                pos_of(INTERVAL),
                "Error",
                INTERVAL,
                "R3",
                f"{constant_name} is FALSE but the interval is {interval.interval}; expected NaN",
            )

    joint = values.get(JOINT_LIST)
    dist = values.get(DISTRIBUTION_LIST)
    if isinstance(joint, PairList) and isinstance(dist, TextList):
        known = set(dist.items)
        seen: set[str] = set()
        for group in joint.groups:
            for member in group:
                if member not in known and member not in seen:
                    seen.add(member)
                    add(
                        pos_of(JOINT_LIST),
                        "Error",
                        JOINT_LIST,
                        "R4",
                        f"{member!r} is not in the building characteristics distribution list",
                    )

    mode = values.get(SAMPLE_MODE)
    if isinstance(mode, EnumChoice) and mode.value == "Probability" and mode.amount is not None:
        if not (0.0 < mode.amount < 1.0):
            add(pos_of(SAMPLE_MODE), "Error", SAMPLE_MODE, "R5", f"probability {mode.amount} outside (0, 1)")

    fmt = values.get(TIMESTAMP)
    if isinstance(fmt, TimestampFormat) and fmt.pattern is not None and pattern_problem(fmt.pattern) is None:
        misses = []
        for sample in timestamp_samples:
            check = check_timestamp_sample(fmt.pattern, sample)
            if not check:
                misses.append((sample, check.reason))
        if misses:
            sample, reason = misses[0]
            add(
                pos_of(TIMESTAMP),
                "Warning",
                TIMESTAMP,
                "R10",
                f"{len(misses)} sample(s) do not match {fmt.pattern!r}, e.g. {sample!r} ({reason})",
            )

    found.sort(key=lambda t: (t[0], t[1]))
    return ValidationReport(doc.document_id, tuple(f for _, _, f in found))

