"""The "Effective coverage" field: GeoJSON areas or named geographies."""

from __future__ import annotations

import ast
import enum
import json
import math
import re
from dataclasses import dataclass, field
from typing import Union

from .errors import EmptyCoverage, MalformedGeometry

Ring = tuple[tuple[float, float], ...]
Polygon = tuple[Ring, ...]


@dataclass(frozen=True)
class GeoCoordinate:
    latitude: float
    longitude: float

    @property
    def in_range(self) -> bool:
        return -90.0 <= self.latitude <= 90.0 and -180.0 <= self.longitude <= 180.0


class Containment(enum.Enum):
    INSIDE = "Inside"
    OUTSIDE = "Outside"
    UNKNOWN = "Unknown"


class GeographyLevel(str, enum.Enum):
    COUNTRY = "country"
    STATE = "state"
    COUNTY = "county"
    ZIPCODE = "zipcode"
    REGION = "region"
    DIVISION = "division"
    FREEFORM = "freeform"


@dataclass(frozen=True)
class GeoArea:
    """Polygon or multipolygon coverage; coordinates are (longitude, latitude)."""

    polygons: tuple[Polygon, ...]
    raw: str = field(compare=False)

    def __str__(self) -> str:
        return self.raw


@dataclass(frozen=True)
class NamedGeography:
    """Coverage expressed as place names or codes.

    ``values`` holds the primary list (the one that decided ``level``);
    any further labelled lists in the source text are kept in ``extra``.
    """

    level: GeographyLevel
    values: tuple[str, ...]
    extra: tuple[tuple[str, tuple[str, ...]], ...] = ()
    raw: str = field(default="", compare=False)

    def __str__(self) -> str:
        return self.raw

    @property
    def lists(self) -> dict[str, tuple[str, ...]]:
        return dict(self.extra)


EffectiveCoverage = Union[GeoArea, NamedGeography]

_COUNTRIES = frozenset(
    s.casefold()
    for s in (
        "U.S.", "US", "USA", "U.S.A.", "United States", "United States of America",
        "Canada", "Mexico", "China", "Japan", "Germany", "France", "United Kingdom", "UK",
        "India", "Australia", "Brazil",
    )
)
_US_STATES = frozenset(
    s.casefold()
    for s in (
        "Alabama", "Alaska", "Arizona", "Arkansas", "California", "Colorado", "Connecticut",
        "Delaware", "Florida", "Georgia", "Hawaii", "Idaho", "Illinois", "Indiana", "Iowa",
        "Kansas", "Kentucky", "Louisiana", "Maine", "Maryland", "Massachusetts", "Michigan",
        "Minnesota", "Mississippi", "Missouri", "Montana", "Nebraska", "Nevada",
        "New Hampshire", "New Jersey", "New Mexico", "New York", "North Carolina",
        "North Dakota", "Ohio", "Oklahoma", "Oregon", "Pennsylvania", "Rhode Island",
        "South Carolina", "South Dakota", "Tennessee", "Texas", "Utah", "Vermont",
        "Virginia", "Washington", "West Virginia", "Wisconsin", "Wyoming",
        "District of Columbia",
    )
)
_LABELLED_LIST = re.compile(r"\s*([A-Za-z][A-Za-z _]*?)\s*:\s*\[([^\]]*)\]\s*,?")
_ZIP = re.compile(r"\d{5}(?:-\d{4})?")
_GEOJSON_TYPES = {"Polygon", "MultiPolygon", "Feature", "FeatureCollection", "Point", "LineString",
                  "MultiPoint", "MultiLineString", "GeometryCollection"}


def _level_for_label(label: str) -> GeographyLevel:
    key = label.strip().casefold()
    if "division" in key:
        return GeographyLevel.DIVISION
    if "region" in key:
        return GeographyLevel.REGION
    if "zip" in key:
        return GeographyLevel.ZIPCODE
    if "county" in key or "counties" in key:
        return GeographyLevel.COUNTY
    if "state" in key:
        return GeographyLevel.STATE
    if "country" in key or "countries" in key or "nation" in key:
        return GeographyLevel.COUNTRY
    return GeographyLevel.FREEFORM


def _from_lists(raw: str, lists: list[tuple[str, tuple[str, ...]]]) -> NamedGeography:
    label, values = lists[0]
    if not values:
        raise EmptyCoverage(f"coverage list {label!r} is empty")
    return NamedGeography(_level_for_label(label), values, tuple(lists[1:]), raw)


def _ring(coords: object) -> Ring:
    if not isinstance(coords, list):
        raise MalformedGeometry("ring must be a list of positions")
    ring = []
    for pos in coords:
        if (
            not isinstance(pos, list)
            or len(pos) < 2
            or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in pos[:2])
        ):
            raise MalformedGeometry(f"bad position {pos!r}")
        ring.append((float(pos[0]), float(pos[1])))
    if len(ring) < 4:
        raise MalformedGeometry(f"ring has {len(ring)} vertices; at least 4 required")
    if ring[0] != ring[-1]:
        raise MalformedGeometry("ring is not closed (first vertex differs from last)")
    return tuple(ring)


def _polygon(coords: object) -> Polygon:
    if not isinstance(coords, list) or not coords:
        raise MalformedGeometry("polygon needs at least one ring")
    return tuple(_ring(r) for r in coords)


def _geometry(obj: dict, raw: str) -> GeoArea:
    kind = obj.get("type")
    if kind == "Feature":
        geom = obj.get("geometry")
        if not isinstance(geom, dict):
            raise MalformedGeometry("feature has no geometry")
        return _geometry(geom, raw)
    if kind == "Polygon":
        return GeoArea((_polygon(obj.get("coordinates")),), raw)
    if kind == "MultiPolygon":
        coords = obj.get("coordinates")
        if not isinstance(coords, list) or not coords:
            raise MalformedGeometry("multipolygon needs at least one polygon")
        return GeoArea(tuple(_polygon(p) for p in coords), raw)
    raise MalformedGeometry(f"unsupported geometry type {kind!r}; expected Polygon or MultiPolygon")


def _split_items(body: str) -> tuple[str, ...]:
    return tuple(t.strip().strip("'\"") for t in re.split(r"[,\s]+", body.strip()) if t.strip().strip("'\""))


def parse_coverage(raw: str) -> EffectiveCoverage:
    """Parse an "Effective coverage" cell.

    GeoJSON Polygon/MultiPolygon text (bare or wrapped in a Feature) becomes
    a :class:`GeoArea`. Anything else becomes a :class:`NamedGeography`
    with a best-effort level. The original text is kept verbatim.
    """
    text = raw.strip()
    if not text:
        raise EmptyCoverage("coverage text is empty")

    if text.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError:
            obj = None
        if isinstance(obj, dict) and obj.get("type") in _GEOJSON_TYPES:
            return _geometry(obj, raw)
        try:
            literal = ast.literal_eval(text)
        except (ValueError, SyntaxError):
            literal = obj
        if isinstance(literal, dict) and literal:
            lists = []
            for key, val in literal.items():
                items = val if isinstance(val, (list, tuple)) else [val]
                lists.append((str(key), tuple(str(v) for v in items)))
            return _from_lists(raw, lists)

    labelled = list(_LABELLED_LIST.finditer(text))
    if labelled and "".join(m.group(0) for m in labelled).strip() == text:
        return _from_lists(raw, [(m.group(1), _split_items(m.group(2))) for m in labelled])

    parts = [p.strip() for p in text.split(",") if p.strip()]
    if parts and all(_ZIP.fullmatch(p) for p in parts):
        return NamedGeography(GeographyLevel.ZIPCODE, tuple(parts), (), raw)
    if text.casefold() in _COUNTRIES:
        return NamedGeography(GeographyLevel.COUNTRY, (text,), (), raw)
    if parts and all(p.casefold() in _US_STATES for p in parts):
        return NamedGeography(GeographyLevel.STATE, tuple(parts), (), raw)
    if parts and all(p.casefold().endswith(" county") for p in parts):
        return NamedGeography(GeographyLevel.COUNTY, tuple(parts), (), raw)
    return NamedGeography(GeographyLevel.FREEFORM, (text,), (), raw)


def _on_segment(px: float, py: float, a: tuple[float, float], b: tuple[float, float]) -> bool:
    (x1, y1), (x2, y2) = a, b
    cross = (x2 - x1) * (py - y1) - (y2 - y1) * (px - x1)
    scale = max(abs(x2 - x1), abs(y2 - y1), 1.0)
    if abs(cross) > 1e-12 * scale * scale:
        return False
    return min(x1, x2) <= px <= max(x1, x2) and min(y1, y2) <= py <= max(y1, y2)


def point_in_polygon(x: float, y: float, polygon: Polygon) -> bool:
    """Even-odd ray casting over every ring; points on an edge count as inside."""
    inside = False
    for ring in polygon:
        for a, b in zip(ring, ring[1:]):
            if _on_segment(x, y, a, b):
                return True
            (x1, y1), (x2, y2) = a, b
            if (y1 > y) != (y2 > y):
                x_cross = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
                if x < x_cross:
                    inside = not inside
    return inside


def contains_point(coverage: EffectiveCoverage, point: GeoCoordinate) -> Containment:
    if not point.in_range or not (math.isfinite(point.latitude) and math.isfinite(point.longitude)):
        raise ValueError(f"coordinate out of range: {point}")
    if isinstance(coverage, NamedGeography):
        # no gazetteer: named places cannot be tested
        return Containment.UNKNOWN
    x, y = point.longitude, point.latitude
    if any(point_in_polygon(x, y, poly) for poly in coverage.polygons):
        return Containment.INSIDE
    return Containment.OUTSIDE
