"""Field kinds and the typed values that fill metadata cells.

``parse_cell`` is deliberately lenient: a cell that cannot be read as its
field's kind comes back as :class:`Text` so validation can report a kind
mismatch instead of parsing failing outright. The one exception is a
bracketed list literal that does not parse, which raises
:class:`MalformedListLiteral`.
"""

from __future__ import annotations

import ast
import enum
import math
import re
from dataclasses import dataclass
from typing import ClassVar, Sequence, Union

from .coverage import EffectiveCoverage, GeoCoordinate, parse_coverage
from .errors import EmptyCoverage, MalformedGeometry, MalformedListLiteral


class KindTag(enum.Enum):
    TEXT = "Text"
    BOOLEAN = "Boolean"
    ENUM = "Enum"
    TEXT_LIST = "TextList"
    PAIR_LIST = "PairList"
    COORDINATE = "Coordinate"
    COVERAGE = "Coverage"
    TIMESTAMP_FORMAT = "TimestampFormat"
    TIME_INTERVAL = "TimeInterval"


@dataclass(frozen=True)
class FieldKind:
    tag: KindTag
    allowed: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.tag is KindTag.ENUM and not self.allowed:
            raise ValueError("Enum kind needs a non-empty allowed set")
        if self.tag is not KindTag.ENUM and self.allowed:
            raise ValueError("only Enum kinds carry an allowed set")

    def __str__(self) -> str:
        if self.tag is KindTag.ENUM:
            return "Enum{" + ", ".join(self.allowed) + "}"
        return self.tag.value


TEXT = FieldKind(KindTag.TEXT)
BOOLEAN = FieldKind(KindTag.BOOLEAN)
TEXT_LIST = FieldKind(KindTag.TEXT_LIST)
PAIR_LIST = FieldKind(KindTag.PAIR_LIST)
COORDINATE = FieldKind(KindTag.COORDINATE)
COVERAGE = FieldKind(KindTag.COVERAGE)
TIMESTAMP_FORMAT = FieldKind(KindTag.TIMESTAMP_FORMAT)
TIME_INTERVAL = FieldKind(KindTag.TIME_INTERVAL)


def enum_kind(*allowed: str) -> FieldKind:
    return FieldKind(KindTag.ENUM, tuple(allowed))


INTERVAL_UNITS = ("min", "day", "month", "year")


def _fmt_number(value: float) -> str:
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


@dataclass(frozen=True)
class TimeInterval:
    """A sampling step such as ``30 min`` or ``1 month``.

    ``TimeInterval()`` (no value, no unit) is the not-applicable interval,
    written as ``NaN``.
    """

    value: float | None = None
    unit: str | None = None

    def __post_init__(self) -> None:
        if self.value is None and self.unit is None:
            return
        if self.value is None or self.unit is None:
            raise ValueError("interval needs both a value and a unit")
        if self.unit not in INTERVAL_UNITS:
            raise ValueError(f"unit must be one of {INTERVAL_UNITS}, got {self.unit!r}")
        if not math.isfinite(self.value) or self.value <= 0:
            raise ValueError(f"interval value must be positive, got {self.value}")

    @property
    def not_applicable(self) -> bool:
        return self.value is None

    def __str__(self) -> str:
        if self.value is None:
            return "NaN"
        return f"{_fmt_number(self.value)} {self.unit}"


NOT_APPLICABLE = TimeInterval()


# -- values -----------------------------------------------------------------


@dataclass(frozen=True)
class Text:
    tag: ClassVar[KindTag] = KindTag.TEXT
    text: str


@dataclass(frozen=True)
class Boolean:
    tag: ClassVar[KindTag] = KindTag.BOOLEAN
    flag: bool


@dataclass(frozen=True)
class EnumChoice:
    """An enumerated choice, optionally qualified by a number.

    The qualifier carries the probability that may accompany the
    ``Probability`` mode, written ``Probability (0.25)``.
    """

    tag: ClassVar[KindTag] = KindTag.ENUM
    value: str
    amount: float | None = None


@dataclass(frozen=True)
class TextList:
    tag: ClassVar[KindTag] = KindTag.TEXT_LIST
    items: tuple[str, ...] = ()


@dataclass(frozen=True)
class PairList:
    tag: ClassVar[KindTag] = KindTag.PAIR_LIST
    groups: tuple[tuple[str, ...], ...] = ()


@dataclass(frozen=True)
class Coordinate:
    tag: ClassVar[KindTag] = KindTag.COORDINATE
    point: GeoCoordinate


@dataclass(frozen=True)
class Coverage:
    tag: ClassVar[KindTag] = KindTag.COVERAGE
    coverage: EffectiveCoverage


@dataclass(frozen=True)
class TimestampFormat:
    """A timestamp pattern; ``pattern=None`` means not applicable (NaN)."""

    tag: ClassVar[KindTag] = KindTag.TIMESTAMP_FORMAT
    pattern: str | None


@dataclass(frozen=True)
class Interval:
    tag: ClassVar[KindTag] = KindTag.TIME_INTERVAL
    interval: TimeInterval


FieldValue = Union[Text, Boolean, EnumChoice, TextList, PairList, Coordinate, Coverage, TimestampFormat, Interval]


# -- cell parsing -----------------------------------------------------------

_CURLY = str.maketrans({"“": '"', "”": '"', "‘": "'", "’": "'"})
_INTERVAL = re.compile(
    r"^\s*(\d+(?:\.\d+)?)\s*(min|mins|minute|minutes|day|days|month|months|year|years)\s*$", re.IGNORECASE
)
_QUALIFIED = re.compile(r"^\s*(.+?)\s*\(\s*([^()]*?)\s*\)\s*$")
_COORD = re.compile(r"^\s*[\(\[]?\s*([-+0-9.eE]+)\s*,\s*([-+0-9.eE]+)\s*[\)\]]?\s*$")


def is_nan(text: str) -> bool:
    return text.strip().casefold() == "nan"


def _squash(text: str) -> str:
    return re.sub(r"[^0-9a-z]", "", text.casefold())


def _literal(node: ast.AST, depth: int) -> object:
    if isinstance(node, ast.Constant) and isinstance(node.value, (str, int, float)) and not isinstance(node.value, bool):
        return str(node.value)
    if isinstance(node, (ast.List, ast.Tuple, ast.Set)) and depth < 2:
        return [_literal(e, depth + 1) for e in node.elts]
    raise ValueError("unsupported element")


def parse_list_literal(text: str, nested: bool = False) -> list:
    """Parse a bracketed list cell.

    Accepts Python-style literals (``['A', 'B']``, nested lists or sets for
    groups) and bare space/comma separated forms such as ``[3 4 1 2]``.
    Curly quotes are read as straight quotes.
    """
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise MalformedListLiteral(f"not a bracketed list: {text!r}")
    inner = body[1:-1].strip()
    if not inner:
        return []
    for candidate in (body, body.translate(_CURLY)):
        try:
            tree = ast.parse(candidate, mode="eval").body
            parsed = _literal(tree, 0)
        except (SyntaxError, ValueError):
            continue
        if not isinstance(parsed, list):
            continue
        if nested:
            if all(isinstance(g, list) and all(isinstance(s, str) for s in g) for g in parsed):
                return parsed
        elif all(isinstance(s, str) for s in parsed):
            return parsed
    if nested or any(c in inner for c in "[]{}'\"“”"):
        raise MalformedListLiteral(f"cannot parse list literal {text!r}")
    return [t for t in re.split(r"[,\s]+", inner) if t]


def _parse_enum(kind: FieldKind, raw: str) -> FieldValue:
    text = raw.strip()
    by_key = {_squash(a): a for a in kind.allowed}
    if _squash(text) in by_key:
        return EnumChoice(by_key[_squash(text)])
    m = _QUALIFIED.match(text)
    if m and _squash(m.group(1)) in by_key:
        try:
            amount = float(m.group(2))
        except ValueError:
            return Text(raw)
        return EnumChoice(by_key[_squash(m.group(1))], amount)
    # not a member; kept as the raw choice so membership checks can name it
    return EnumChoice(text)


def parse_cell(kind: FieldKind, raw: str) -> FieldValue:
    text = raw.strip()
    tag = kind.tag
    if tag is KindTag.TEXT:
        return Text(raw)
    if tag is KindTag.BOOLEAN:
        if text.casefold() in ("true", "false"):
            return Boolean(text.casefold() == "true")
        return Text(raw)
    if tag is KindTag.ENUM:
        return _parse_enum(kind, raw)
    if tag is KindTag.TEXT_LIST:
        if text.startswith("["):
            return TextList(tuple(parse_list_literal(text)))
        return TextList((text,)) if text else TextList()
    if tag is KindTag.PAIR_LIST:
        if text.startswith("["):
            return PairList(tuple(tuple(g) for g in parse_list_literal(text, nested=True)))
        return Text(raw)
    if tag is KindTag.COORDINATE:
        m = _COORD.match(text)
        if m:
            try:
                return Coordinate(GeoCoordinate(float(m.group(1)), float(m.group(2))))
            except ValueError:
                pass
        return Text(raw)
    if tag is KindTag.COVERAGE:
        try:
            return Coverage(parse_coverage(raw))
        except (EmptyCoverage, MalformedGeometry):
            return Text(raw)
    if tag is KindTag.TIMESTAMP_FORMAT:
        if is_nan(text):
            return TimestampFormat(None)
        return TimestampFormat(text)
    if tag is KindTag.TIME_INTERVAL:
        if is_nan(text):
            return Interval(NOT_APPLICABLE)
        m = _INTERVAL.match(text)
        if m:
            unit = m.group(2).casefold()
            unit = "min" if unit.startswith("min") else unit.rstrip("s")
            try:
                return Interval(TimeInterval(float(m.group(1)), unit))
            except ValueError:
                pass
        return Text(raw)
    raise AssertionError(tag)


def _quote_items(items: Sequence[str]) -> str:
    return "[" + ", ".join(repr(s) for s in items) + "]"


def format_cell(value: FieldValue) -> str:
    if isinstance(value, Text):
        return value.text
    if isinstance(value, Boolean):
        return "TRUE" if value.flag else "FALSE"
    if isinstance(value, EnumChoice):
        if value.amount is None:
            return value.value
        return f"{value.value} ({value.amount!r})"
    if isinstance(value, TextList):
        return _quote_items(value.items)
    if isinstance(value, PairList):
        return "[" + ", ".join(_quote_items(g) for g in value.groups) + "]"
    if isinstance(value, Coordinate):
        return f"({value.point.latitude!r}, {value.point.longitude!r})"
    if isinstance(value, Coverage):
        return str(value.coverage)
    if isinstance(value, TimestampFormat):
        return "NaN" if value.pattern is None else value.pattern
    if isinstance(value, Interval):
        return str(value.interval)
    raise TypeError(f"not a field value: {value!r}")
