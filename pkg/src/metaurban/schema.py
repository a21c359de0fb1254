"""The Meta-Urban schema as data.

Six of the seven open-data categories for urban building energy modeling
carry a field catalog. Field names and notes are kept verbatim, so the
same catalog renders the alignment prompt and the ``schema show`` output.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Mapping

from .errors import NoSchemaForCategory, UnknownField
from .values import (
    BOOLEAN,
    COORDINATE,
    COVERAGE,
    PAIR_LIST,
    TEXT,
    TEXT_LIST,
    TIME_INTERVAL,
    TIMESTAMP_FORMAT,
    EnumChoice,
    FieldKind,
    FieldValue,
    PairList,
    Text,
    TextList,
    enum_kind,
)


class SchemaCategory(enum.Enum):
    WEATHER = "Weather"
    BUILDING_STOCK_GIS = "BuildingStockGIS"
    OCCUPANT_BEHAVIOR = "OccupantBehavior"
    BUILDING_CHARACTERISTICS = "BuildingCharacteristics"
    MACROSCOPIC_ENERGY = "MacroscopicEnergy"
    MICROSCOPIC_ENERGY = "MicroscopicEnergy"
    COMPREHENSIVE_DATA_LAKE = "ComprehensiveDataLake"

    @property
    def title(self) -> str:
        return _TITLES[self]

    @property
    def token(self) -> str:
        return _TOKENS[self]

    @classmethod
    def from_token(cls, token: str) -> SchemaCategory:
        key = token.strip().casefold().replace("_", "-")
        for cat in cls:
            if key in (cat.token, cat.value.casefold(), *_EXTRA_TOKENS.get(cat, ())):
                return cat
        raise ValueError(f"unknown category {token!r}; expected one of {', '.join(c.token for c in cls)}")

    def __str__(self) -> str:
        return self.value


_TITLES = {
    SchemaCategory.WEATHER: "Weather Information",
    SchemaCategory.BUILDING_STOCK_GIS: "Building Stock GIS Information",
    SchemaCategory.OCCUPANT_BEHAVIOR: "Occupant Behavior",
    SchemaCategory.BUILDING_CHARACTERISTICS: "Building Characteristics",
    SchemaCategory.MACROSCOPIC_ENERGY: "Macroscopic energy data",
    SchemaCategory.MICROSCOPIC_ENERGY: "Microscopic energy data",
    SchemaCategory.COMPREHENSIVE_DATA_LAKE: "Comprehensive Data Lake",
}
_TOKENS = {
    SchemaCategory.WEATHER: "weather",
    SchemaCategory.BUILDING_STOCK_GIS: "gis",
    SchemaCategory.OCCUPANT_BEHAVIOR: "occupant-behavior",
    SchemaCategory.BUILDING_CHARACTERISTICS: "building-characteristics",
    SchemaCategory.MACROSCOPIC_ENERGY: "macro-energy",
    SchemaCategory.MICROSCOPIC_ENERGY: "micro-energy",
    SchemaCategory.COMPREHENSIVE_DATA_LAKE: "data-lake",
}
_EXTRA_TOKENS = {
    SchemaCategory.BUILDING_STOCK_GIS: ("building-stock-gis",),
    SchemaCategory.MACROSCOPIC_ENERGY: ("macroscopic-energy",),
    SchemaCategory.MICROSCOPIC_ENERGY: ("microscopic-energy",),
    SchemaCategory.COMPREHENSIVE_DATA_LAKE: ("comprehensive-data-lake",),
}


@dataclass(frozen=True)
class FieldSpec:
    canonical_name: str
    kind: FieldKind
    required: bool
    aliases: tuple[str, ...] = ()
    notes: str = ""
    default: FieldValue | None = None


@dataclass(frozen=True)
class CategorySchema:
    category: SchemaCategory
    fields: tuple[FieldSpec, ...]
    _index: Mapping[str, int] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        index: dict[str, int] = {}
        for pos, spec in enumerate(self.fields):
            for name in (spec.canonical_name, *spec.aliases):
                key = name_key(name)
                if key in index:
                    raise ValueError(f"{self.category}: name {name!r} collides with another field")
                index[key] = pos
        object.__setattr__(self, "_index", index)

    def __iter__(self) -> Iterator[FieldSpec]:
        return iter(self.fields)

    def __len__(self) -> int:
        return len(self.fields)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(f.canonical_name for f in self.fields)

    def position(self, canonical_name: str) -> int:
        for pos, spec in enumerate(self.fields):
            if spec.canonical_name == canonical_name:
                return pos
        raise UnknownField(self.category, canonical_name)

    def spec(self, canonical_name: str) -> FieldSpec:
        return self.fields[self.position(canonical_name)]

    def lookup(self, name: str) -> FieldSpec | None:
        pos = self._index.get(name_key(name))
        return None if pos is None else self.fields[pos]


def name_key(name: str) -> str:
    """Case- and punctuation-insensitive comparison key for field names."""
    return re.sub(r"[^0-9a-z]", "", name.casefold())


# -- field catalogs --------------------------------------------------------

NAME = "Name of Dataset/ Website"
TIMESTAMP = "Timestamp format"
CONSTANT_Q = "Constant Interval?"
CONSTANT = "Constant Interval"
INTERVAL = "Time interval"
INTERPOLATION = "Interpolation Methodology"
COVERAGE_FIELD = "Effective coverage"
SAMPLE_MODE = "Sample or Probability"
DISTRIBUTION_LIST = "Building characteristics distribution list"
JOINT_LIST = "Joint distribution list"
ENERGY_LIST = "Energy Data List"
LOD = "Levels of detail (LoD)"

_STRING = "String value"
_TS_NOTE = "e.g., HH:MM:SS MM/DD/YYYY"
_TF = "True or False"
_INTERVAL_MIN = "Unit: min, e.g., “1 min”, “30 min”, “60 min”, or “NaN” (if constant interval is True)"
_INTERVAL_MIN_PLAIN = 'Unit: min, e.g., "1 min", "30 min", "60 min", or "NaN" (if constant interval is True)'
_LINEAR = "Linear, etc."
_COVERAGE_CURLY = (
    "Format such as “GeoJSON” defining the effective area; or geographic information such as country, "
    "state, zip code, etc."
)
_COVERAGE = (
    'Format such as "GeoJSON" defining the effective area; or geographic information such as country, '
    "state, zip code, etc."
)

_UNKNOWN_TEXT = Text("Unknown")
_EMPTY_LIST = TextList()


def _f(name, kind, required=True, notes="", aliases=(), default=None) -> FieldSpec:
    return FieldSpec(name, kind, required, tuple(aliases), notes, default)


def _weather() -> tuple[FieldSpec, ...]:
    return (
        _f(NAME, TEXT, notes=_STRING),
        _f(TIMESTAMP, TIMESTAMP_FORMAT, notes=_TS_NOTE),
        _f(CONSTANT_Q, BOOLEAN, notes=_TF),
        _f(INTERVAL, TIME_INTERVAL, notes=_INTERVAL_MIN),
        _f(INTERPOLATION, TEXT, False, _LINEAR, default=_UNKNOWN_TEXT),
        _f(
            "Location of weather collection",
            COORDINATE,
            False,
            "Coordinate in tuple format, e.g. (32.36200946378022, -111.07590759052607)",
        ),
        _f(COVERAGE_FIELD, COVERAGE, False, _COVERAGE_CURLY),
        _f("EPW or not", BOOLEAN, notes=_TF),
        _f("AMY/TMY/Others", enum_kind("AMY", "TMY", "Others"), notes="[“AMY”, “TMY”, “Others”]"),
    )


def _gis() -> tuple[FieldSpec, ...]:
    return (
        _f(NAME, TEXT, notes=_STRING),
        _f("Resolution", enum_kind("Building", "Community"), notes="By building or community level"),
        _f("3D or 2D", enum_kind("3D", "2D"), notes="“3D” or “2D” Building Models"),
        _f(
            "Data Format",
            enum_kind("Shapefile", "FileGDB", "GeoJSON", "CityGML"),
            notes="Shapefile/FileGDB, GeoJSON, and CityGML",
        ),
        _f(
            LOD,
            enum_kind("LoD1", "LoD2", "LoD3", "LoD4"),
            notes=(
                "1) LoD1: simple 2-D footprint, 2) LoD2: a box shape, adding slope roofs, 3) LoD3: adding "
                "exterior shades and windows and doors, 4) LoD4: and full details of interior layout and zoning"
            ),
            aliases=("LoD", "Level of detail"),
        ),
    )


def _occupant() -> tuple[FieldSpec, ...]:
    return (
        _f(NAME, TEXT, notes=_STRING),
        _f(TIMESTAMP, TIMESTAMP_FORMAT, notes=_TS_NOTE),
        _f(CONSTANT_Q, BOOLEAN, notes=_TF),
        _f(INTERVAL, TIME_INTERVAL, notes=_INTERVAL_MIN),
        _f(
            "Building Type",
            TEXT_LIST,
            False,
            "Effective building type list, e.g., [“Office Building”, “Single Family House”, "
            "“Multi-family House” etc.]",
            default=_EMPTY_LIST,
        ),
        _f(
            "Behavior Type",
            TEXT_LIST,
            False,
            "[“occupancy”, “HVAC”, “laundry”, “cooking”, “lighting” etc.]",
            default=_EMPTY_LIST,
        ),
        _f(
            "Control Action",
            TEXT_LIST,
            False,
            '["Thermostat Adjustment", "HVAC on/off", "Lighting on/off", "Window open/close" etc.]',
            default=_EMPTY_LIST,
        ),
        _f(
            "Behavior Relevant Factors",
            TEXT_LIST,
            False,
            '["Indoor Temperature", "Outdoor Temperature", "Humidity", "Illuminance Level" etc.]',
            default=_EMPTY_LIST,
        ),
        _f(COVERAGE_FIELD, COVERAGE, False, _COVERAGE, aliases=("Study Area",)),
    )


def _building_characteristics() -> tuple[FieldSpec, ...]:
    return (
        _f(NAME, TEXT, notes=_STRING),
        _f(COVERAGE_FIELD, COVERAGE, notes=_COVERAGE),
        _f(
            SAMPLE_MODE,
            enum_kind("Sample", "Probability"),
            notes=(
                'Select from "Sample" and "Probability". The unit of sample is number of buildings; '
                "the probability is unitless and its value is less than 1"
            ),
        ),
        _f(
            DISTRIBUTION_LIST,
            TEXT_LIST,
            notes=(
                "List all the available building characteristics included in a list, e.g., "
                '["floorspace", "building envelope", "building systems", "principal building activity", '
                '"number of story"]'
            ),
        ),
        _f(
            JOINT_LIST,
            PAIR_LIST,
            notes=(
                "Subset of building characteristics distribution list only listing joint distribution groups, "
                'e.g., [{"floorspace", "number of story"}, {"building systems", "principal building activity"}]; '
                "if no joint distribution, the value is an empty list []"
            ),
            default=PairList(),
        ),
    )


def _macroscopic() -> tuple[FieldSpec, ...]:
    return (
        _f(NAME, TEXT, notes=_STRING),
        _f(
            "Sector",
            enum_kind("Residential", "Commercial", "All", "Unknown"),
            notes="Residential, commercial, all, and unknown",
            default=EnumChoice("Unknown"),
        ),
        _f("Timeseries", BOOLEAN, notes=_TF),
        _f(TIMESTAMP, TIMESTAMP_FORMAT, notes=_TS_NOTE),
        _f(CONSTANT, BOOLEAN, notes=_TF),
        _f(
            INTERVAL,
            TIME_INTERVAL,
            notes=(
                'e.g., "1 min", "30 min", "60 min", "1 day", "1 month", "1 year", (if constant interval is True), '
                'or "NaN" (if constant interval is False)'
            ),
        ),
        _f(INTERPOLATION, TEXT, notes=_LINEAR, default=_UNKNOWN_TEXT),
        _f(COVERAGE_FIELD, COVERAGE, notes=_COVERAGE),
        _f(
            ENERGY_LIST,
            TEXT_LIST,
            notes="List all the available energy data variables included in a list",
        ),
    )


def _microscopic() -> tuple[FieldSpec, ...]:
    return (
        _f(NAME, TEXT, notes=_STRING),
        _f(TIMESTAMP, TIMESTAMP_FORMAT, notes=_TS_NOTE),
        _f(CONSTANT_Q, BOOLEAN, notes=_TF),
        _f(INTERVAL, TIME_INTERVAL, notes=_INTERVAL_MIN_PLAIN),
        _f(INTERPOLATION, TEXT, False, _LINEAR, default=_UNKNOWN_TEXT),
        _f(
            "Geographic information",
            COVERAGE,
            False,
            "Geographic information such as country, state, zip code, address, etc.",
        ),
        _f("Existing Metadata Schema?", BOOLEAN, notes=_TF),
    )


_BUILDERS = {
    SchemaCategory.WEATHER: _weather,
    SchemaCategory.BUILDING_STOCK_GIS: _gis,
    SchemaCategory.OCCUPANT_BEHAVIOR: _occupant,
    SchemaCategory.BUILDING_CHARACTERISTICS: _building_characteristics,
    SchemaCategory.MACROSCOPIC_ENERGY: _macroscopic,
    SchemaCategory.MICROSCOPIC_ENERGY: _microscopic,
}

SCHEMA_CATEGORIES = tuple(_BUILDERS)

# list fields whose items name extractable variables
VARIABLE_LIST_FIELDS: dict[SchemaCategory, tuple[str, ...]] = {
    SchemaCategory.OCCUPANT_BEHAVIOR: ("Behavior Type", "Control Action", "Behavior Relevant Factors"),
    SchemaCategory.BUILDING_CHARACTERISTICS: (DISTRIBUTION_LIST,),
    SchemaCategory.MACROSCOPIC_ENERGY: (ENERGY_LIST,),
}


@lru_cache(maxsize=None)
def builtin_schema(category: SchemaCategory) -> CategorySchema:
    """Return the field catalog for *category*.

    Raises :class:`NoSchemaForCategory` for the comprehensive data lake,
    which aggregates other categories and has no fields of its own.
    """
    try:
        build = _BUILDERS[category]
    except KeyError:
        raise NoSchemaForCategory(category) from None
    return CategorySchema(category, build())


def resolve_field_name(category: SchemaCategory, name: str) -> str:
    if not name or not name.strip():
        raise ValueError("field name must be non-empty")
    spec = builtin_schema(category).lookup(name)
    if spec is None:
        raise UnknownField(category, name)
    return spec.canonical_name


# -- documents --------------------------------------------------------------


@dataclass(frozen=True)
class MetadataDocument:
    """One dataset described in schema terms.

    Entries are kept in catalog order with no duplicates. Presence of
    required fields and value kinds are checked by validation, not here,
    so that incomplete documents can still be represented and reported on.
    """

    category: SchemaCategory
    entries: tuple[tuple[str, FieldValue], ...]

    def __post_init__(self) -> None:
        schema = builtin_schema(self.category)
        last = -1
        for name, _ in self.entries:
            pos = schema.position(name)
            if pos == last:
                raise ValueError(f"duplicate field {name!r}")
            if pos < last:
                raise ValueError(f"field {name!r} out of catalog order")
            last = pos

    @classmethod
    def build(cls, category: SchemaCategory, values: Mapping[str, FieldValue]) -> MetadataDocument:
        """Create a document from names in any order; names may be aliases."""
        schema = builtin_schema(category)
        resolved: dict[str, FieldValue] = {}
        for name, value in values.items():
            canonical = resolve_field_name(category, name)
            if canonical in resolved:
                raise ValueError(f"field {canonical!r} given twice")
            resolved[canonical] = value
        ordered = sorted(resolved.items(), key=lambda kv: schema.position(kv[0]))
        return cls(category, tuple(ordered))

    @property
    def schema(self) -> CategorySchema:
        return builtin_schema(self.category)

    def as_dict(self) -> dict[str, FieldValue]:
        return dict(self.entries)

    def get(self, name: str) -> FieldValue | None:
        canonical = resolve_field_name(self.category, name)
        return self.as_dict().get(canonical)

    def __contains__(self, name: object) -> bool:
        return isinstance(name, str) and self.get(name) is not None

    def without(self, name: str) -> MetadataDocument:
        canonical = resolve_field_name(self.category, name)
        return MetadataDocument(self.category, tuple(kv for kv in self.entries if kv[0] != canonical))

    def replace(self, name: str, value: FieldValue) -> MetadataDocument:
        values = self.as_dict()
        values[resolve_field_name(self.category, name)] = value
        return MetadataDocument.build(self.category, values)

    @property
    def document_id(self) -> str:
        name = self.as_dict().get(NAME)
        if isinstance(name, Text) and name.text.strip():
            return name.text.strip()
        return str(self.category)
