"""Typed first-normal-form datatables.

A cell holds a number (``int`` or finite ``float``), a text (``str``) or
nothing (``None``).  Tables are immutable once built; operations such as
:func:`drop_column` return new tables.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Sequence, Union

Number = Union[int, float]
CellValue = Union[int, float, str, None]

_DECIMAL_RE = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)")
# "<int> (<lo>[-<hi>][ <])", the cell shape of the printed scale's first column
COMPOSITE_RE = re.compile(
    r"\s*(\d+(?:\.\d+)?)\s*\(\s*(\d+(?:\.\d+)?)\s*"
    r"(?:[-–]\s*(\d+(?:\.\d+)?)\s*)?(<)?\s*\)\s*"
)


class ColumnType(enum.Enum):
    NUMBER = "number"
    TEXT = "text"

    def __str__(self) -> str:
        return self.value


class TableError(Exception):
    pass


class FieldNotFoundError(TableError):
    def __init__(self, name, header=()):
        super().__init__(f"field not found: {name!r} (fields: {', '.join(header)})")
        self.name = name


class ShapeError(TableError):
    pass


def is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def parse_number(text: str) -> Number | None:
    """Parse a '.'-separated decimal; return None when *text* is not one."""
    text = text.strip()
    if not _DECIMAL_RE.fullmatch(text):
        return None
    if "." in text:
        return float(text)
    return int(text)


def format_number(value: Number) -> str:
    """Shortest positional decimal text; integral values print without a point."""
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite number: {value}")
        if value.is_integer():
            return str(int(value))
        text = format(Decimal(repr(value)), "f")
        return text.rstrip("0").rstrip(".") if "." in text else text
    return str(value)


def format_cell(value: CellValue) -> str:
    if value is None:
        return ""
    if is_number(value):
        return format_number(value)
    return value


def is_composite(text: str) -> bool:
    return COMPOSITE_RE.fullmatch(text) is not None


def infer_column_types(rows: Sequence[Sequence[str]]) -> list[ColumnType]:
    """Infer a type per column from raw text rows.

    A column is NUMBER when each of its non-empty cells parses as a decimal;
    a column with no non-empty cell at all is TEXT.
    """
    if not rows:
        return []
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ShapeError(f"row {i + 1} has {len(row)} cells, expected {width}")
    types = []
    for col in range(width):
        cells = [row[col] for row in rows if row[col].strip() != ""]
        if cells and all(parse_number(c) is not None for c in cells):
            types.append(ColumnType.NUMBER)
        else:
            types.append(ColumnType.TEXT)
    return types


def convert_cell(text: str, ctype: ColumnType) -> CellValue:
    if text.strip() == "":
        return None
    if ctype is ColumnType.NUMBER:
        value = parse_number(text)
        if value is None:
            raise ValueError(f"not a number: {text!r}")
        return value
    return text


@dataclass(frozen=True)
class Datatable:
    header: tuple[str, ...]
    records: tuple[tuple[CellValue, ...], ...]
    column_types: tuple[ColumnType, ...]

    def __post_init__(self):
        # Malformed (ragged) records are allowed here; validate_1nf reports them.
        object.__setattr__(self, "header", tuple(self.header))
        object.__setattr__(self, "records", tuple(tuple(r) for r in self.records))
        object.__setattr__(self, "column_types", tuple(self.column_types))

    @classmethod
    def from_text_rows(cls, header: Sequence[str], rows: Sequence[Sequence[str]],
                       column_types: Sequence[ColumnType] | None = None) -> "Datatable":
        """Build a table from raw text cells, inferring column types if not given."""
        rows = [list(r) for r in rows]
        for i, row in enumerate(rows):
            if len(row) != len(header):
                raise ShapeError(
                    f"record {i + 1} has {len(row)} cells, header has {len(header)}")
        if column_types is None:
            column_types = infer_column_types(rows) if rows else [ColumnType.TEXT] * len(header)
        records = [[convert_cell(c, t) for c, t in zip(row, column_types)] for row in rows]
        return cls(tuple(header), records, tuple(column_types))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.records), len(self.header)

    def field_index(self, name: str) -> int:
        try:
            return self.header.index(name)
        except ValueError:
            raise FieldNotFoundError(name, self.header) from None

    def cell(self, row: int, name: str) -> CellValue:
        """Cell at 0-based record *row* in field *name*."""
        return self.records[row][self.field_index(name)]

    def text_rows(self) -> list[list[str]]:
        return [[format_cell(v) for v in rec] for rec in self.records]


@dataclass
class Violation:
    row: int | None       # 1-based record number, 0 for the header, None for table-wide
    column: int | None    # 0-based field index
    reason: str

    def __str__(self) -> str:
        where = []
        if self.row is not None:
            where.append("header" if self.row == 0 else f"record {self.row}")
        if self.column is not None:
            where.append(f"field {self.column + 1}")
        return f"{', '.join(where) or 'table'}: {self.reason}"


@dataclass
class ValidationReport:
    violations: list[Violation]
    shape: tuple[int, int]
    warnings: list[Violation] = field(default_factory=list)

    @property
    def is_1nf(self) -> bool:
        return not self.violations


def validate_1nf(table: Datatable) -> ValidationReport:
    """Check rectangularity, per-column typing, atomicity and field names."""
    violations: list[Violation] = []
    warnings: list[Violation] = []
    width = len(table.header)

    seen = set()
    for i, name in enumerate(table.header):
        if not isinstance(name, str) or not name.strip():
            violations.append(Violation(0, i, "empty field name"))
        elif name in seen:
            violations.append(Violation(0, i, f"duplicate field name {name!r}"))
        seen.add(name)
    if len(table.column_types) != width:
        violations.append(Violation(
            None, None,
            f"{len(table.column_types)} column types declared for {width} fields"))

    for r, record in enumerate(table.records, start=1):
        if len(record) != width:
            violations.append(Violation(r, None, f"{len(record)} cells, expected {width}"))
        for c, value in enumerate(record[:width]):
            ctype = table.column_types[c] if c < len(table.column_types) else None
            if isinstance(value, str) and is_composite(value):
                violations.append(Violation(r, c, f"non-atomic composite value {value!r}"))
                continue
            if value is None:
                if ctype is ColumnType.NUMBER:
                    warnings.append(Violation(r, c, "missing number"))
                continue
            if ctype is ColumnType.NUMBER:
                if not is_number(value):
                    violations.append(Violation(r, c, f"{value!r} is not a number"))
                elif not math.isfinite(value):
                    violations.append(Violation(r, c, f"non-finite number {value!r}"))
            elif ctype is ColumnType.TEXT and not isinstance(value, str):
                violations.append(Violation(r, c, f"{value!r} is not text"))

    return ValidationReport(violations, (len(table.records), width), warnings)


def drop_column(table: Datatable, name: str) -> Datatable:
    idx = table.field_index(name)
    keep = [i for i in range(len(table.header)) if i != idx]
    return Datatable(
        tuple(table.header[i] for i in keep),
        [tuple(rec[i] for i in keep if i < len(rec)) for rec in table.records],
        tuple(table.column_types[i] for i in keep),
    )


def column_vector(table: Datatable, name: str) -> list[CellValue]:
    idx = table.field_index(name)
    return [rec[idx] for rec in table.records]


def find_field(table: Datatable, name: str) -> str:
    """Resolve *name* case-insensitively, also accepting a singular/plural prefix.

    ``find_field(t, "specification")`` finds a "Specifications" column.
    """
    if name in table.header:
        return name
    key = name.casefold()
    for h in table.header:
        if h.casefold() == key:
            return h
    for h in table.header:
        if h.casefold().startswith(key) or key.startswith(h.casefold()):
            return h
    raise FieldNotFoundError(name, table.header)

