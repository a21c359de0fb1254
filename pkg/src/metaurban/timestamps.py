"""Timestamp patterns of the ``YYYY-MM-DD HH:MM:SS`` family.

Patterns are built from the tokens YYYY, MM, DD, HH, MM, SS joined by
separator characters. ``MM`` is ambiguous: it reads as minutes when it
touches a ``:`` or directly follows ``HH``, otherwise as the month.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime, timedelta
from typing import Iterable, Sequence

SEPARATORS = frozenset(" -/:.T,")

# canonical form written by the toolkit when it normalizes timestamp keys
CANONICAL_PATTERN = "YYYY-MM-DD HH:MM:SS"

_WIDTH = {"year": 4, "month": 2, "day": 2, "hour": 2, "minute": 2, "second": 2}
_RANGES = {"month": (1, 12), "day": (1, 31), "hour": (0, 23), "minute": (0, 59), "second": (0, 59)}
_STRFTIME = {"year": "%Y", "month": "%m", "day": "%d", "hour": "%H", "minute": "%M", "second": "%S"}

# formats accepted for raw cells in source tables
RAW_FORMATS = (
    "%Y-%m-%d %H:%M:%S",
    "%Y-%m-%dT%H:%M:%S",
    "%Y-%m-%d %H:%M",
    "%Y-%m-%dT%H:%M",
    "%Y-%m-%d",
    "%Y/%m/%d %H:%M:%S",
    "%Y/%m/%d %H:%M",
    "%Y/%m/%d",
    "%m/%d/%Y %H:%M:%S",
    "%m/%d/%Y %H:%M",
    "%m/%d/%Y",
    "%H:%M:%S %m/%d/%Y",
    "%Y-%m",
)

_HAS_DIGIT_AND_SEP = re.compile(r"\d[-/:T ]\d|\d[-/:]")


@dataclass(frozen=True)
class PatternElement:
    unit: str | None  # None for a literal separator run
    text: str


@dataclass(frozen=True)
class SampleCheck:
    """Outcome of matching one sample against a pattern; falsy on mismatch."""

    matched: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.matched


MATCH = SampleCheck(True)


def parse_pattern(pattern: str) -> list[PatternElement]:
    """Split *pattern* into token and separator elements.

    Raises ``ValueError`` naming the first problem found.
    """
    if not pattern or not pattern.strip():
        raise ValueError("empty pattern")
    elements: list[PatternElement] = []
    i = 0
    while i < len(pattern):
        if pattern.startswith("YYYY", i):
            elements.append(PatternElement("year", "YYYY"))
            i += 4
        elif pattern[i : i + 2] in ("MM", "DD", "HH", "SS"):
            tok = pattern[i : i + 2]
            unit = {"DD": "day", "HH": "hour", "SS": "second"}.get(tok, "MM")
            elements.append(PatternElement(unit, tok))
            i += 2
        elif pattern[i] in SEPARATORS:
            j = i
            while j < len(pattern) and pattern[j] in SEPARATORS:
                j += 1
            elements.append(PatternElement(None, pattern[i:j]))
            i = j
        else:
            raise ValueError(f"unexpected character {pattern[i]!r} at position {i}")

    for idx, el in enumerate(elements):
        if el.unit != "MM":
            continue
        before = elements[idx - 1] if idx > 0 else None
        after = elements[idx + 1] if idx + 1 < len(elements) else None
        prev_token = next((e for e in reversed(elements[:idx]) if e.unit is not None), None)
        minute = (
            (before is not None and before.unit is None and before.text.endswith(":"))
            or (after is not None and after.unit is None and after.text.startswith(":"))
            or (prev_token is not None and prev_token.unit == "hour")
        )
        elements[idx] = PatternElement("minute" if minute else "month", "MM")

    units = [el.unit for el in elements if el.unit is not None]
    if not units:
        raise ValueError("pattern contains no date or time tokens")
    for unit in set(units):
        if units.count(unit) > 1:
            raise ValueError(f"{unit} appears more than once")
    return elements


def pattern_problem(pattern: str) -> str | None:
    """Return why *pattern* is malformed, or None if it is well formed."""
    try:
        parse_pattern(pattern)
    except ValueError as exc:
        return str(exc)
    return None


def check_timestamp_sample(pattern: str, sample: str) -> SampleCheck:
    elements = parse_pattern(pattern)
    pos = 0
    values: dict[str, int] = {}
    for el in elements:
        if el.unit is None:
            if not sample.startswith(el.text, pos):
                return SampleCheck(False, f"expected separator {el.text!r} at position {pos}")
            pos += len(el.text)
            continue
        width = _WIDTH[el.unit]
        digits = 0
        while pos + digits < len(sample) and sample[pos + digits].isdigit():
            digits += 1
        if digits != width:
            return SampleCheck(False, f"token width: {el.text} ({el.unit}) expects {width} digits, found {digits}")
        values[el.unit] = int(sample[pos : pos + width])
        pos += width
    if pos != len(sample):
        return SampleCheck(False, f"unexpected trailing text {sample[pos:]!r}")
    for unit, value in values.items():
        lo_hi = _RANGES.get(unit)
        if lo_hi and not lo_hi[0] <= value <= lo_hi[1]:
            return SampleCheck(False, f"{unit} out of range: {value}")
    return MATCH


def to_strftime(pattern: str) -> str:
    parts = []
    for el in parse_pattern(pattern):
        parts.append(_STRFTIME[el.unit] if el.unit else el.text.replace("%", "%%"))
    return "".join(parts)


def format_timestamp(moment: datetime, pattern: str) -> str:
    return moment.strftime(to_strftime(pattern))


def parse_timestamp(cell: str) -> datetime | None:
    """Parse a raw table cell under any supported layout."""
    text = cell.strip()
    if not text or not _HAS_DIGIT_AND_SEP.search(text):
        return None
    for fmt in RAW_FORMATS:
        try:
            return datetime.strptime(text, fmt)
        except ValueError:
            continue
    return None


def _month_index(moment: datetime) -> int:
    return moment.year * 12 + moment.month - 1


def _same_clock(a: datetime, b: datetime) -> bool:
    return (a.day, a.hour, a.minute, a.second, a.microsecond) == (b.day, b.hour, b.minute, b.second, b.microsecond)


def infer_step(moments: Sequence[datetime]) -> tuple[float, str] | None:
    """Infer a constant sampling step as ``(count, unit)``.

    Calendar month and year steps are recognized before fixed durations.
    Returns None when there are fewer than two moments or steps vary.
    """
    if len(moments) < 2:
        return None
    pairs = list(zip(moments, moments[1:]))
    if all(_same_clock(a, b) for a, b in pairs):
        steps = {_month_index(b) - _month_index(a) for a, b in pairs}
        if len(steps) == 1:
            (months,) = steps
            if months > 0:
                if months % 12 == 0:
                    return (months // 12, "year")
                return (months, "month")
            return None
    deltas = {b - a for a, b in pairs}
    if len(deltas) != 1:
        return None
    (delta,) = deltas
    if delta <= timedelta(0):
        return None
    seconds = delta.total_seconds()
    if seconds % 86400 == 0:
        return (int(seconds // 86400), "day")
    if seconds % 60 == 0:
        return (int(seconds // 60), "min")
    return None


def parse_all(cells: Iterable[str]) -> list[datetime] | None:
    out = []
    for cell in cells:
        moment = parse_timestamp(cell)
        if moment is None:
            return None
        out.append(moment)
    return out
