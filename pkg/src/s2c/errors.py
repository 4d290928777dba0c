"""Exception hierarchy. Each class carries the CLI exit code it maps to."""

from __future__ import annotations

from collections.abc import Iterable


class S2CError(Exception):
    exit_code = 2


class IoError(S2CError):
    """A file could not be read or written."""

    exit_code = 3


class SchemaError(S2CError):
    """A document does not conform to its schema.

    ``location`` is a human-readable pointer such as ``line 4, column 9`` or
    ``activities[3].automation``.
    """

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class StageError(SchemaError):
    """A pipeline stage name could not be mapped onto the canonical stages."""


class CatalogReferenceError(S2CError):
    """Names used by activities that do not resolve to declared entries."""

    exit_code = 1

    def __init__(self, offenders: Iterable[str]):
        self.offenders = sorted(set(offenders))
        super().__init__("unresolved references: " + ", ".join(self.offenders))


class FilterError(S2CError):
    pass


class XmlError(S2CError):
    def __init__(self, message: str, offset: int | None = None, line: int | None = None, column: int | None = None):
        self.offset = offset
        self.line = line
        self.column = column
        where = f" at byte offset {offset} (line {line}, column {column})" if offset is not None else ""
        super().__init__(f"malformed XML{where}: {message}")


class SubsetError(S2CError):
    """The BPMN document lies outside the supported subset."""


class MappingError(S2CError):
    pass


class UnclassifiedError(S2CError):
    exit_code = 1

    def __init__(self, ids: Iterable[str]):
        self.ids = sorted(set(ids))
        super().__init__("activities without automation classification: " + ", ".join(self.ids))


class FormatError(S2CError):
    pass
