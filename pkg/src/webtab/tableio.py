"""Reading and writing datatables as CSV, TSV or JSON (always UTF-8, LF newlines).

JSON files carry the column types, so they never need type inference::

    {"header": ["Force", ...], "types": ["number", ...], "records": [[0, ...], ...]}
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

from .table import ColumnType, Datatable, TableError, format_cell, is_number

FORMATS = ("csv", "tsv", "json")


class TableFormatError(TableError):
    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


def format_for_path(path, default: str = "csv") -> str:
    suffix = Path(path).suffix.lower().lstrip(".")
    return suffix if suffix in FORMATS else default


def read_table(text: str, fmt: str) -> Datatable:
    text = text.removeprefix("\ufeff")
    if fmt == "json":
        return _read_json(text)
    if fmt == "csv":
        reader = csv.reader(io.StringIO(text, newline=""), strict=True)
        try:
            rows = [(reader.line_num, row) for row in reader if row]
        except csv.Error as exc:
            raise TableFormatError(str(exc), reader.line_num) from None
        lines = [n for n, _ in rows]
        rows = [r for _, r in rows]
    elif fmt == "tsv":
        raw = text.replace("\r\n", "\n").split("\n")
        lines, rows = [], []
        for n, line in enumerate(raw, start=1):
            if line:
                lines.append(n)
                rows.append(line.split("\t"))
    else:
        raise ValueError(f"unknown table format {fmt!r}")
    if not rows:
        raise TableFormatError("no header row", 1)
    header, records = rows[0], rows[1:]
    for line, row in zip(lines[1:], records):
        if len(row) != len(header):
            raise TableFormatError(
                f"record has {len(row)} fields, header has {len(header)}", line)
    return Datatable.from_text_rows(header, records)


def _read_json(text: str) -> Datatable:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TableFormatError(exc.msg, exc.lineno) from None
    if not isinstance(doc, dict) or not {"header", "types", "records"} <= doc.keys():
        raise TableFormatError("expected an object with header, types and records")
    header, types, records = doc["header"], doc["types"], doc["records"]
    if not isinstance(header, list) or not all(isinstance(h, str) for h in header):
        raise TableFormatError("header must be a list of strings")
    try:
        types = [ColumnType(t) for t in types]
    except (TypeError, ValueError) as exc:
        raise TableFormatError(f"bad column type: {exc}") from None
    if len(types) != len(header):
        raise TableFormatError(f"{len(types)} types for {len(header)} fields")
    for i, rec in enumerate(records, start=1):
        if not isinstance(rec, list) or len(rec) != len(header):
            raise TableFormatError(f"record {i} does not have {len(header)} fields")
        for value, t in zip(rec, types):
            ok = value is None or (
                is_number(value) and math.isfinite(value) if t is ColumnType.NUMBER
                else isinstance(value, str))
            if not ok:
                raise TableFormatError(f"record {i}: {value!r} is not {t}")
    records = [[None if v == "" else v for v in rec] for rec in records]
    return Datatable(tuple(header), records, tuple(types))


def write_table(table: Datatable, fmt: str) -> str:
    if fmt == "json":
        doc = {
            "header": list(table.header),
            "types": [t.value for t in table.column_types],
            "records": [[_json_value(v) for v in rec] for rec in table.records],
        }
        return json.dumps(doc, ensure_ascii=False, indent=1) + "\n"
    rows = [list(table.header)] + table.text_rows()
    if fmt == "csv":
        buf = io.StringIO()
        try:
            csv.writer(buf, lineterminator="\n").writerows(rows)
        except csv.Error as exc:
            raise TableFormatError(f"cannot write CSV: {exc}") from None
        return buf.getvalue()
    if fmt == "tsv":
        for r, row in enumerate(rows):
            for cell in row:
                if any(ch in cell for ch in "\t\r\n"):
                    where = "header" if r == 0 else f"record {r}"
                    raise TableFormatError(f"{where}: TSV cells cannot hold tabs or newlines")
        return "".join("\t".join(row) + "\n" for row in rows)
    raise ValueError(f"unknown table format {fmt!r}")


def _json_value(value):
    if isinstance(value, float) and value.is_integer():
        return int(value)
    return value


def load_table(path, fmt: str | None = None) -> Datatable:
    fmt = fmt or format_for_path(path)
    with open(path, encoding="utf-8", newline="") as f:
        return read_table(f.read(), fmt)


def emit_table(table: Datatable, path, fmt: str | None = None) -> None:
    fmt = fmt or format_for_path(path)
    text = write_table(table, fmt)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)


def format_record(values) -> str:
    """One CSV line (no newline) for a record."""
    buf = io.StringIO()
    csv.writer(buf, lineterminator="").writerow([format_cell(v) for v in values])
    return buf.getvalue()
