"""Declarative cleanup scripts that turn extracted table text into a datatable.

A script is an ordered list of steps.  Text steps (``replace``, ``unify``)
rewrite the raw text; the first table step turns the tab-separated lines
into a :class:`~webtab.table.Datatable`, and the remaining steps edit that
table.  Every executed step leaves one entry in the :class:`AuditLog`.

Script files are UTF-8, one step per line, fields separated by tabs::

    # comment
    replace	^p(	^t	14
    replace	-	^t	13
    replace	)		14
    unify	|
    header
    drop	Upper
    patch	13	Specifications	Devastation.

Patterns and replacements use word-processor escapes: ``^p`` is a
paragraph mark (newline), ``^t`` a tab and ``^^`` a literal caret.
"""

from __future__ import annotations

import re
import string
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence, Union

from .table import (
    COMPOSITE_RE,
    ColumnType,
    Datatable,
    ShapeError,
    TableError,
    ValidationReport,
    convert_cell,
    drop_column,
    parse_number,
    validate_1nf,
)

_ESCAPES = {"p": "\n", "t": "\t", "^": "^"}


class CleanseError(Exception):
    pass


class InvalidPatternError(CleanseError, ValueError):
    pass


class SplitError(CleanseError):
    def __init__(self, cell, record=None):
        where = f" in record {record}" if record is not None else ""
        super().__init__(f"cell {cell!r}{where} does not match the composite shape")
        self.cell = cell
        self.record = record


class ScriptSyntaxError(CleanseError):
    def __init__(self, message, lineno=None):
        prefix = f"line {lineno}: " if lineno is not None else ""
        super().__init__(prefix + message)
        self.lineno = lineno


class ScriptError(CleanseError):
    """A step failed; ``audit`` holds the entries of the steps run before it."""

    def __init__(self, message, audit: "AuditLog"):
        super().__init__(message)
        self.audit = audit


def expand_escapes(text: str) -> str:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "^":
            if i + 1 >= len(text) or text[i + 1] not in _ESCAPES:
                raise InvalidPatternError(f"bad escape at offset {i} in {text!r}")
            out.append(_ESCAPES[text[i + 1]])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def replace_all(text: str, pattern: str, replacement: str) -> tuple[str, int]:
    """Replace every non-overlapping occurrence of *pattern*, scanning left to right.

    Both *pattern* and *replacement* are literals with ``^`` escapes.
    Returns the new text and the number of replacements made.
    """
    pat = expand_escapes(pattern)
    if not pat:
        raise InvalidPatternError("empty pattern")
    rep = expand_escapes(replacement)
    return text.replace(pat, rep), text.count(pat)


def unify_separators(lines: Sequence[str], extra_separators) -> list[str]:
    """Turn each occurrence of an extra separator into exactly one tab.

    Consecutive separators are kept, so empty fields survive.
    """
    table = str.maketrans({sep: "\t" for sep in extra_separators})
    return [line.translate(table) for line in lines]


@dataclass(frozen=True)
class CompositeFieldSpec:
    names: tuple[str, str, str] = ("value", "lo", "hi")
    pattern: re.Pattern = COMPOSITE_RE


class SplitResult(NamedTuple):
    value: Union[int, float]
    lo: Union[int, float]
    hi: Union[int, float, None]
    open_ended: bool = False


def split_composite_field(cell: str, spec: CompositeFieldSpec = CompositeFieldSpec()) -> SplitResult:
    """Split ``"8 (55-65)"`` into ``(8, 55, 65)``.

    ``"0 (0)"`` has no upper bound and ``"12 (105 <)"`` is open-ended; both
    give ``hi=None``.
    """
    m = spec.pattern.fullmatch(cell) if isinstance(cell, str) else None
    if m is None:
        raise SplitError(cell)
    value, lo, hi, open_mark = m.groups()
    return SplitResult(
        parse_number(value),
        parse_number(lo),
        parse_number(hi) if hi is not None else None,
        open_mark is not None,
    )


# -- steps ------------------------------------------------------------------

ColumnRef = Union[str, int]


def _resolve_column(table: Datatable, column: ColumnRef) -> int:
    if isinstance(column, int):
        if not 1 <= column <= len(table.header):
            raise TableError(f"column {column} outside 1..{len(table.header)}")
        return column - 1
    return table.field_index(column)


def _spreadsheet_letters(n: int) -> list[str]:
    names = []
    for i in range(n):
        s = ""
        i += 1
        while i:
            i, r = divmod(i - 1, 26)
            s = string.ascii_uppercase[r] + s
        names.append(s)
    return names


def text_to_table(text: str, header: bool = True) -> Datatable:
    """Read tab-separated lines as a table; without a header, fields are named A, B, ..."""
    lines = text.split("\n")
    while lines and lines[-1] == "":
        lines.pop()
    rows = [line.split("\t") for line in lines]
    if header:
        if not rows:
            raise ShapeError("no header line")
        names, rows = rows[0], rows[1:]
    else:
        names = _spreadsheet_letters(len(rows[0]) if rows else 0)
    for i, row in enumerate(rows):
        if len(row) != len(names):
            lineno = i + 2 if header else i + 1
            raise ShapeError(f"line {lineno} has {len(row)} fields, expected {len(names)}")
    return Datatable.from_text_rows(names, rows)


@dataclass(frozen=True)
class Replace:
    pattern: str
    replacement: str
    expected_count: int | None = None

    def describe(self) -> str:
        return f"replace {self.pattern!r} with {self.replacement!r}"

    def run(self, text: str):
        new, count = replace_all(text, self.pattern, self.replacement)
        return new, count, ""


@dataclass(frozen=True)
class UnifySeparators:
    separators: str

    def describe(self) -> str:
        return f"unify separators {self.separators!r} to tab"

    def run(self, text: str):
        seps = expand_escapes(self.separators)
        count = sum(text.count(s) for s in seps)
        lines = unify_separators(text.split("\n"), seps)
        per_line = Counter(line.count("\t") + 1 for line in lines if line)
        note = "lines by field count: " + ", ".join(
            f"{n} fields x{k}" for n, k in sorted(per_line.items())) if per_line else ""
        return "\n".join(lines), count, note


@dataclass(frozen=True)
class DeclareHeader:
    flag: bool = True

    def describe(self) -> str:
        return "text to table, " + ("first line is header" if self.flag else "no header")

    def run(self, text: str):
        table = text_to_table(text, header=self.flag)
        return table, len(table.records), ""


@dataclass(frozen=True)
class SplitColumn:
    column: ColumnRef
    spec: CompositeFieldSpec = CompositeFieldSpec()

    def describe(self) -> str:
        return f"split {self.column!r} into {', '.join(self.spec.names)}"

    def run(self, table: Datatable):
        idx = _resolve_column(table, self.column)
        records, open_rows = [], []
        for r, rec in enumerate(table.records, start=1):
            try:
                parts = split_composite_field(rec[idx], self.spec)
            except SplitError:
                raise SplitError(rec[idx], r) from None
            if parts.open_ended:
                open_rows.append(str(r))
            records.append(rec[:idx] + parts[:3] + rec[idx + 1:])
        header = table.header[:idx] + tuple(self.spec.names) + table.header[idx + 1:]
        types = (table.column_types[:idx] + (ColumnType.NUMBER,) * 3
                 + table.column_types[idx + 1:])
        note = f"open-ended: record {', '.join(open_rows)}" if open_rows else ""
        return Datatable(header, records, types), len(records), note


@dataclass(frozen=True)
class DropColumn:
    name: str

    def describe(self) -> str:
        return f"drop column {self.name!r}"

    def run(self, table: Datatable):
        return drop_column(table, self.name), len(table.records), ""


@dataclass(frozen=True)
class Patch:
    row: int              # 1-based record number
    column: ColumnRef
    value: str

    def describe(self) -> str:
        return f"patch record {self.row} {self.column!r} = {self.value!r}"

    def run(self, table: Datatable):
        idx = _resolve_column(table, self.column)
        if not 1 <= self.row <= len(table.records):
            raise TableError(f"record {self.row} outside 1..{len(table.records)}")
        value = convert_cell(self.value, table.column_types[idx])
        records = list(table.records)
        rec = records[self.row - 1]
        records[self.row - 1] = rec[:idx] + (value,) + rec[idx + 1:]
        return Datatable(table.header, records, table.column_types), 1, ""


Step = Union[Replace, UnifySeparators, DeclareHeader, SplitColumn, DropColumn, Patch]
TEXT_STEPS = (Replace, UnifySeparators)


@dataclass(frozen=True)
class CleanupScript:
    steps: tuple[Step, ...]

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if not self.steps:
            raise ScriptSyntaxError("a script needs at least one step")
        table_started = False
        for i, step in enumerate(self.steps, start=1):
            if isinstance(step, TEXT_STEPS):
                if table_started:
                    raise ScriptSyntaxError(f"step {i}: text step after the table was built")
            elif isinstance(step, DeclareHeader):
                if table_started:
                    raise ScriptSyntaxError(f"step {i}: header must be the first table step")
                table_started = True
            else:
                table_started = True
            expected = getattr(step, "expected_count", None)
            if expected is not None and expected < 0:
                raise ScriptSyntaxError(f"step {i}: negative expected count")


# -- audit ------------------------------------------------------------------

@dataclass
class AuditEntry:
    step: int
    description: str
    count: int
    expected: int | None = None
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.expected is None or self.count == self.expected

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def format(self) -> str:
        count = str(self.count) if self.expected is None else f"{self.count}/{self.expected}"
        line = f"{self.step}\t{self.description}\t{count}\t{self.status}"
        return f"{line}\t{self.note}" if self.note else line


@dataclass
class AuditLog:
    entries: list[AuditEntry] = field(default_factory=list)
    validation: ValidationReport | None = None

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def counts(self) -> list[int]:
        return [e.count for e in self.entries]

    def lines(self) -> list[str]:
        return [e.format() for e in self.entries]


def run_script(script: CleanupScript, data: str | bytes) -> tuple[Datatable, AuditLog]:
    """Apply *script* to raw text and return the resulting table and audit log.

    A step whose count differs from its expected count is marked FAIL but
    does not stop the run.  Hard failures raise :class:`ScriptError`.
    """
    audit = AuditLog()
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ScriptError(f"input is not UTF-8: {exc}", audit) from exc
    text = data.removeprefix("\ufeff").replace("\r\n", "\n")

    state: str | Datatable = text
    for i, step in enumerate(script.steps, start=1):
        try:
            if not isinstance(step, TEXT_STEPS) and isinstance(state, str) \
                    and not isinstance(step, DeclareHeader):
                state = text_to_table(state, header=False)
            state, count, note = step.run(state)
        except (CleanseError, TableError, ValueError) as exc:
            raise ScriptError(f"step {i} ({step.describe()}): {exc}", audit) from exc
        audit.entries.append(AuditEntry(
            i, step.describe(), count, getattr(step, "expected_count", None), note))

    if isinstance(state, str):
        try:
            state = text_to_table(state, header=False)
        except TableError as exc:
            raise ScriptError(f"text to table: {exc}", audit) from exc
    audit.validation = validate_1nf(state)
    return state, audit


# -- script files -------------------------------------------------------------

def _column_ref(text: str) -> ColumnRef:
    text = text.strip()
    return int(text) if text.isdigit() else text


def _count(text: str, lineno: int) -> int | None:
    text = text.strip()
    if not text:
        return None
    if not text.isdigit():
        raise ScriptSyntaxError(f"expected count must be a non-negative integer, got {text!r}",
                                lineno)
    return int(text)


def parse_script(text: str) -> CleanupScript:
    steps: list[Step] = []
    for lineno, line in enumerate(text.replace("\r\n", "\n").split("\n"), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        op, *args = line.split("\t")
        op = op.strip().lower()
        try:
            if op == "replace":
                if len(args) < 2:
                    raise ScriptSyntaxError("replace needs a pattern and a replacement", lineno)
                expand_escapes(args[1])
                if not expand_escapes(args[0]):
                    raise ScriptSyntaxError("empty pattern", lineno)
                expected = _count(args[2], lineno) if len(args) > 2 else None
                steps.append(Replace(args[0], args[1], expected))
            elif op == "unify":
                if not args or not expand_escapes(args[0]):
                    raise ScriptSyntaxError("unify needs separator characters", lineno)
                steps.append(UnifySeparators(args[0]))
            elif op == "header":
                flag = args[0].strip().lower() if args else "yes"
                if flag not in ("yes", "no", "true", "false"):
                    raise ScriptSyntaxError(f"header flag must be yes or no, got {flag!r}", lineno)
                steps.append(DeclareHeader(flag in ("yes", "true")))
            elif op == "split":
                if len(args) not in (1, 4):
                    raise ScriptSyntaxError("split needs a column and optionally three names",
                                            lineno)
                spec = CompositeFieldSpec(tuple(a.strip() for a in args[1:4])) \
                    if len(args) == 4 else CompositeFieldSpec()
                steps.append(SplitColumn(_column_ref(args[0]), spec))
            elif op == "drop":
                if len(args) != 1 or not args[0].strip():
                    raise ScriptSyntaxError("drop needs a field name", lineno)
                steps.append(DropColumn(args[0].strip()))
            elif op == "patch":
                if len(args) not in (2, 3) or not args[0].strip().isdigit():
                    raise ScriptSyntaxError("patch needs a record number, a column and a value",
                                            lineno)
                value = args[2] if len(args) == 3 else ""
                steps.append(Patch(int(args[0]), _column_ref(args[1]), value))
            else:
                raise ScriptSyntaxError(f"unknown step {op!r}", lineno)
        except InvalidPatternError as exc:
            raise ScriptSyntaxError(str(exc), lineno) from exc
    return CleanupScript(tuple(steps))
