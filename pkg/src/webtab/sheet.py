"""A sparse worksheet addressed by A1 references."""

from __future__ import annotations

import math
import re
import string
from dataclasses import dataclass

from .errors import ref_error
from .table import CellValue, Datatable, is_number

MAX_COLUMN = 26 + 26 * 26   # ZZ
_REF_RE = re.compile(r"([A-Za-z]{1,2})([1-9][0-9]*)")


class RefSyntaxError(ValueError):
    pass


def column_index(letters: str) -> int:
    """``"A"`` -> 1, ``"Z"`` -> 26, ``"AA"`` -> 27."""
    n = 0
    for ch in letters.upper():
        n = n * 26 + string.ascii_uppercase.index(ch) + 1
    return n


def column_letters(index: int) -> str:
    if not 1 <= index <= MAX_COLUMN:
        raise RefSyntaxError(f"column {index} outside A..ZZ")
    s = ""
    while index:
        index, r = divmod(index - 1, 26)
        s = string.ascii_uppercase[r] + s
    return s


@dataclass(frozen=True, order=True)
class CellRef:
    row: int
    column: int

    @classmethod
    def parse(cls, text: str) -> "CellRef":
        m = _REF_RE.fullmatch(text.strip())
        if not m:
            raise RefSyntaxError(f"invalid cell reference {text!r}")
        return cls(int(m[2]), column_index(m[1]))

    def offset(self, rows: int = 0, columns: int = 0) -> "CellRef":
        return CellRef(self.row + rows, self.column + columns)

    def __str__(self) -> str:
        return f"{column_letters(self.column)}{self.row}"


@dataclass(frozen=True)
class RangeRef:
    start: CellRef
    end: CellRef

    def __post_init__(self):
        top, bottom = sorted((self.start.row, self.end.row))
        left, right = sorted((self.start.column, self.end.column))
        object.__setattr__(self, "start", CellRef(top, left))
        object.__setattr__(self, "end", CellRef(bottom, right))

    @classmethod
    def parse(cls, text: str) -> "RangeRef":
        first, sep, second = text.partition(":")
        if not sep:
            raise RefSyntaxError(f"invalid range {text!r}")
        return cls(CellRef.parse(first), CellRef.parse(second))

    @property
    def is_vector(self) -> bool:
        return self.start.row == self.end.row or self.start.column == self.end.column

    def cells(self) -> list[CellRef]:
        return [CellRef(r, c)
                for r in range(self.start.row, self.end.row + 1)
                for c in range(self.start.column, self.end.column + 1)]

    def __str__(self) -> str:
        return f"{self.start}:{self.end}"


def as_ref(ref: CellRef | str) -> CellRef:
    return ref if isinstance(ref, CellRef) else CellRef.parse(ref)


class Sheet:
    """Cells not set read as empty (``None``)."""

    def __init__(self):
        self._cells: dict[CellRef, CellValue] = {}

    def get(self, ref: CellRef | str) -> CellValue:
        return self._cells.get(as_ref(ref))

    def set(self, ref: CellRef | str, value: CellValue) -> "Sheet":
        ref = as_ref(ref)
        if value is not None and not isinstance(value, str):
            if not is_number(value):
                raise TypeError(f"cannot store {type(value).__name__} in a cell")
            if not math.isfinite(value):
                raise ValueError(f"non-finite number {value!r}")
        if value is None or value == "":
            self._cells.pop(ref, None)
        else:
            self._cells[ref] = value
        return self

    def vector(self, rng: RangeRef | str) -> list[CellValue]:
        rng = rng if isinstance(rng, RangeRef) else RangeRef.parse(rng)
        if not rng.is_vector:
            raise ref_error(f"{rng} is not a single row or column", str(rng))
        return [self._cells.get(ref) for ref in rng.cells()]

    def bind_table(self, table: Datatable, anchor: CellRef | str = "A1",
                   header: bool = True) -> "Sheet":
        """Write *table* with its top-left corner at *anchor*.

        Raises #REF! if the target rectangle leaves the grid or touches a
        non-empty cell; nothing is written in that case.
        """
        anchor = as_ref(anchor)
        rows = ([list(table.header)] if header else []) + [list(r) for r in table.records]
        width = len(table.header)
        if width and anchor.column + width - 1 > MAX_COLUMN:
            raise ref_error(f"table does not fit right of {anchor}", str(anchor))
        targets = {}
        for i, row in enumerate(rows):
            for j, value in enumerate(row):
                targets[anchor.offset(i, j)] = value
        clash = sorted(ref for ref in targets if ref in self._cells)
        if clash:
            raise ref_error(f"cell {clash[0]} is already in use", str(clash[0]))
        for ref, value in targets.items():
            self.set(ref, value)
        return self

    def evaluate(self, formula: str):
        from .formula import evaluate, parse_formula
        return evaluate(parse_formula(formula), self)

    def __len__(self) -> int:
        return len(self._cells)
