"""The schema-alignment prompt sent to a chat model."""

from __future__ import annotations

import re

from ..schema import SchemaCategory, builtin_schema

OPENING = "Automate everything without asking follow-up questions."
FILES_WITH_CODEBOOK = (
    "The uploaded File 1 and File 2 are data value and code book. File 2 is optional. Below is the target schema."
)
FILES_DATA_ONLY = "The uploaded File 1 is data value. Below is the target schema."
TASK_METADATA = (
    "The first task is to generate a metadata.csv that represents the aligned schema of the data in {files} "
    "in accordance with the schema. Make sure that the rows in the generated csv file are the fields of the "
    "schema with one column representing the value."
)
TASK_SERIES = (
    "The second task is to generate processed data under desired format. For each item in the value list "
    "(for example “Energy Data List”, and “Building characteristics distribution list”), generate a csv file "
    "whose first column is timestamp or ID, and second column is value (timeseries or non-timeseries). The "
    "first column name is “timestamp” or “ID”, and the second column name is the value label."
)
OPEN_QUOTE, CLOSE_QUOTE = "“", "”"

_STRAIGHT_QUOTED = re.compile(r'"([^"]*)"')


def prompt_notes(notes: str) -> str:
    """Render catalog notes for the prompt.

    Straight double quotes become typographic pairs, and set braces in
    examples become list brackets, which is the group syntax the metadata
    parser reads back.
    """
    text = _STRAIGHT_QUOTED.sub(lambda m: f"{OPEN_QUOTE}{m.group(1)}{CLOSE_QUOTE}", notes)
    return text.replace("{", "[").replace("}", "]")


def schema_block(category: SchemaCategory) -> str:
    lines = []
    for spec in builtin_schema(category):
        notes = prompt_notes(spec.notes)
        lines.append(f"{spec.canonical_name} {notes}" if notes else spec.canonical_name)
    return "\n\n".join([OPEN_QUOTE, *lines, CLOSE_QUOTE])


def build_prompt(category: SchemaCategory, has_codebook: bool) -> str:
    paragraphs = [
        OPENING,
        FILES_WITH_CODEBOOK if has_codebook else FILES_DATA_ONLY,
        schema_block(category),
        TASK_METADATA.format(files="file 1 and file 2" if has_codebook else "file 1"),
        TASK_SERIES,
    ]
    return "\n\n".join(paragraphs) + "\n"
