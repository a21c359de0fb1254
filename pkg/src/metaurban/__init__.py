"""Meta-Urban: a semantic metadata schema for open urban building energy data.

The package holds the schema catalog, validates metadata documents against
it, and aligns raw open datasets (a data table plus optional codebook) to
the schema, writing a ``metadata.csv`` and one two-column file per variable.
"""

from .coverage import Containment, GeoArea, GeoCoordinate, NamedGeography, contains_point, parse_coverage
from .schema import (
    CategorySchema,
    FieldSpec,
    MetadataDocument,
    SchemaCategory,
    builtin_schema,
    resolve_field_name,
)
from .validation import ValidationReport, validate_document

__version__ = "0.1.0"

__all__ = [
    "CategorySchema",
    "Containment",
    "FieldSpec",
    "GeoArea",
    "GeoCoordinate",
    "MetadataDocument",
    "NamedGeography",
    "SchemaCategory",
    "ValidationReport",
    "builtin_schema",
    "contains_point",
    "parse_coverage",
    "resolve_field_name",
    "validate_document",
]
