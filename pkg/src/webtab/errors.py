"""Spreadsheet-style error values shared by the lookup, sheet and style modules."""

from __future__ import annotations

import enum


class ErrorKind(enum.Enum):
    NA = "#N/A"
    VALUE = "#VALUE!"
    REF = "#REF!"

    def __str__(self) -> str:
        return self.value


class CellError(Exception):
    """A spreadsheet error value (#N/A, #VALUE!, #REF!).

    Raised by the lookup primitives; the formula evaluator returns the
    instance as the result of a formula instead of letting it escape.
    ``offending`` carries the input that triggered the error.
    """

    def __init__(self, kind: ErrorKind, message: str = "", offending=None):
        super().__init__(message or kind.value)
        self.kind = kind
        self.message = message
        self.offending = offending

    def __str__(self) -> str:
        return self.kind.value

    def __repr__(self) -> str:
        return f"CellError({self.kind.name}, {self.message!r})"

    def __eq__(self, other):
        if isinstance(other, CellError):
            return self.kind is other.kind
        return NotImplemented

    def __hash__(self):
        return hash(self.kind)


def na(message: str = "", offending=None) -> CellError:
    return CellError(ErrorKind.NA, message, offending)


def value_error(message: str = "", offending=None) -> CellError:
    return CellError(ErrorKind.VALUE, message, offending)


def ref_error(message: str = "", offending=None) -> CellError:
    return CellError(ErrorKind.REF, message, offending)
