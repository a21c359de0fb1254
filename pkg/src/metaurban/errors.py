"""Exception hierarchy.

The CLI maps these families onto exit codes: input problems exit 2,
alignment/validation failures exit 1, transport failures exit 3.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .validation import ValidationReport


class MetaUrbanError(Exception):
    """Base class for every error raised by this package."""


# -- input errors -----------------------------------------------------------


class InputError(MetaUrbanError):
    """Bad input data or arguments (CLI exit code 2)."""


class NoSchemaForCategory(InputError):
    def __init__(self, category: object) -> None:
        super().__init__(f"no field schema defined for category {category}")
        self.category = category


class UnknownField(InputError):
    def __init__(self, category: object, name: str) -> None:
        super().__init__(f"unknown field {name!r} for category {category}")
        self.category = category
        self.name = name


class EmptyCoverage(InputError, ValueError):
    pass


class MalformedGeometry(InputError, ValueError):
    pass


class EmptyInput(InputError):
    pass


class MalformedHeader(InputError):
    pass


class RaggedRows(InputError):
    def __init__(self, line: int, expected: int, found: int) -> None:
        super().__init__(f"line {line}: expected {expected} cells, found {found}")
        self.line = line
        self.expected = expected
        self.found = found


class UnresolvableCategory(InputError):
    pass


class MalformedListLiteral(InputError, ValueError):
    pass


class MissingColumn(InputError, KeyError):
    def __init__(self, column: str) -> None:
        super().__init__(column)
        self.column = column

    def __str__(self) -> str:
        return f"column {self.column!r} not found in table"


class UnparseableTimestamp(InputError, ValueError):
    def __init__(self, row: int, cell: str, pattern: str) -> None:
        super().__init__(f"row {row}: cannot render {cell!r} as {pattern}")
        self.row = row
        self.cell = cell
        self.pattern = pattern


class IoFailure(InputError, OSError):
    def __init__(self, path: object, reason: str = "") -> None:
        super().__init__(f"cannot write {path}: {reason}".rstrip(": "))
        self.path = path


# -- alignment / validation failures -----------------------------------------


class AlignmentError(MetaUrbanError):
    """The alignment step produced unusable output (CLI exit code 1)."""


class RuleTargetMissing(AlignmentError):
    pass


class ProducedInvalidDocument(AlignmentError):
    def __init__(self, report: ValidationReport) -> None:
        errors = [f for f in report.findings if f.severity == "Error"]
        summary = "; ".join(f"{f.rule} {f.field}: {f.message}" for f in errors[:5])
        super().__init__(f"aligned document failed validation ({len(errors)} errors): {summary}")
        self.report = report


class InvalidDocument(AlignmentError):
    def __init__(self, report: ValidationReport) -> None:
        super().__init__(f"document {report.document_id!r} is not valid")
        self.report = report


class NoCsvInResponse(AlignmentError):
    pass


class MalformedReply(AlignmentError):
    """A model reply had a CSV block that could not be read as metadata."""


# -- transport --------------------------------------------------------------


class TransportError(MetaUrbanError):
    """Talking to the model endpoint failed (CLI exit code 3)."""


class EndpointUnreachable(TransportError):
    pass


class HttpError(TransportError):
    def __init__(self, status: int, body: str = "") -> None:
        super().__init__(f"endpoint returned HTTP {status}")
        self.status = status
        self.body = body


class MissingCredentials(TransportError):
    def __init__(self, env_var: str) -> None:
        super().__init__(f"environment variable {env_var} is not set")
        self.env_var = env_var
