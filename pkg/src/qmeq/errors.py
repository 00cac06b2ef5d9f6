"""Exception hierarchy shared by the library, the service, and the CLI."""

from __future__ import annotations


class QmeqError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(QmeqError, ValueError):
    """Operands have incompatible or invalid dimensions."""


class MachineValidationError(QmeqError, ValueError):
    """A machine, state, or basis failed validation.

    Carries the full list of diagnostics so callers can report every
    problem at once instead of the first one found.
    """

    def __init__(self, diagnostics: list[str] | tuple[str, ...] | str):
        if isinstance(diagnostics, str):
            diagnostics = [diagnostics]
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


class ParseError(QmeqError, ValueError):
    """A machine or circuit file is malformed.  Positions are 1-based."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            where = f" ({where})"
        super().__init__(f"{message}{where}")
        self.message = message


class ResourceLimitError(QmeqError, RuntimeError):
    """A configured size or node budget would be exceeded."""


class UsageError(QmeqError, ValueError):
    """A request is well-formed but semantically invalid (unknown state

    name, mismatched machines, bad input sequence, ...).
    """
