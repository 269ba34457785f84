"""Command-line interface.

Exit codes: 0 success, 1 a lookup or formula produced an error value,
2 bad input (unreadable file, bad script, formula syntax), 3 the cleanup
audit reported a failed count check.
"""

from __future__ import annotations

import argparse
import sys

from . import beaufort, lookup
from .cleanse import ScriptError, ScriptSyntaxError, parse_script, run_script
from .errors import CellError
from .formula import FormulaSyntaxError, evaluate, format_result, parse_formula
from .sheet import CellRef, RefSyntaxError, Sheet
from .style import (
    FORCE_SENTENCE,
    SELECTION_SENTENCE,
    SPEED_SENTENCE,
    BandPalette,
    SentenceTemplate,
    TemplateError,
    build_sentence,
    emit_bar_chart,
    load_palette,
    render_colored,
    rgb_for_force,
)
from .table import Datatable, TableError, column_vector, find_field, parse_number, validate_1nf
from .tableio import FORMATS, format_for_path, format_record, load_table, write_table

EXIT_OK = 0
EXIT_CELL_ERROR = 1
EXIT_INPUT_ERROR = 2
EXIT_AUDIT_FAILED = 3


class InputError(Exception):
    pass


def _out(text: str = "") -> None:
    sys.stdout.write(text + "\n")


def _err(text: str) -> None:
    sys.stderr.write(text + "\n")


def parse_value(text: str):
    """Command-line cell value: a number if it looks like one, ``"..."`` forces text."""
    if len(text) >= 2 and text[0] == text[-1] == '"':
        return text[1:-1]
    if text == "":
        return None
    number = parse_number(text)
    return text if number is None else number


def _table(args) -> Datatable:
    if args.table is None:
        return beaufort.table()
    try:
        table = load_table(args.table)
    except OSError as exc:
        raise InputError(f"cannot read {args.table}: {exc.strerror}") from None
    except (TableError, ValueError) as exc:
        raise InputError(f"{args.table}: {exc}") from None
    return table


def _valid_table(args) -> Datatable:
    table = _table(args)
    report = validate_1nf(table)
    if not report.is_1nf:
        raise InputError("table is not in first normal form: "
                         + "; ".join(str(v) for v in report.violations))
    return table


def _palette(args) -> BandPalette:
    if getattr(args, "palette", None) is None:
        return beaufort.palette()
    try:
        return load_palette(args.palette)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read palette {args.palette}: {exc}") from None


class _Columns:
    """The four Beaufort fields of a table, found by name."""

    def __init__(self, table: Datatable):
        try:
            self.names = {key: find_field(table, key) for key in
                          ("force", "speed", "description", "specification")}
        except TableError as exc:
            raise InputError(str(exc)) from None
        self.vectors = {key: column_vector(table, name) for key, name in self.names.items()}

    def record_at(self, position: int) -> dict:
        return {key: lookup.index(vec, position) for key, vec in self.vectors.items()}


def lookup_record(table: Datatable, by: str, value) -> tuple[dict, list]:
    """Find a record by force (linear search), speed (binary search) or description.

    Returns the record as a dict for sentence templates, plus the output row:
    the input value first, then the other three fields.
    """
    cols = _Columns(table)
    if by == "speed":
        position = lookup.match_ascending(value, cols.vectors["speed"])
    else:
        position = lookup.match_exact(value, cols.vectors[by])
    record = cols.record_at(position)
    if by == "speed":
        record["speed"] = value
    order = [by] + [k for k in ("force", "speed", "description", "specification") if k != by]
    return record, [record[k] for k in order]


def _colour(text: str, record: dict, args) -> str:
    """Colour *text* with the band colour of the record's force."""
    rgb = rgb_for_force(int(record["force"]), _palette(args))
    return render_colored(text, rgb, args.color)


# -- subcommands ----------------------------------------------------------------

def cmd_convert(args) -> int:
    try:
        with open(args.script, encoding="utf-8") as f:
            script = parse_script(f.read())
        with open(args.input, "rb") as f:
            data = f.read()
    except OSError as exc:
        raise InputError(f"cannot read {exc.filename}: {exc.strerror}") from None
    except (ScriptSyntaxError, UnicodeDecodeError) as exc:
        raise InputError(f"{args.script}: {exc}") from None

    try:
        table, audit = run_script(script, data)
    except ScriptError as exc:
        for line in exc.audit.lines():
            _err(line)
        raise InputError(str(exc)) from None

    for line in audit.lines():
        _err(line)
    report = audit.validation
    _err(f"validate 1NF: {report.shape[0]} records x {report.shape[1]} fields, "
         f"{'PASS' if report.is_1nf else 'FAIL'}")
    for v in report.violations:
        _err(f"  {v}")

    fmt = args.format or (format_for_path(args.output) if args.output else "csv")
    try:
        text = write_table(table, fmt)
    except TableError as exc:
        raise InputError(str(exc)) from None
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8", newline="") as f:
                f.write(text)
        except OSError as exc:
            raise InputError(f"cannot write {args.output}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)
    return EXIT_OK if audit.passed and report.is_1nf else EXIT_AUDIT_FAILED


def cmd_validate(args) -> int:
    table = _table(args)
    report = validate_1nf(table)
    records, fields = report.shape
    _out(f"records: {records}")
    _out(f"fields: {fields}")
    _out("types: " + ",".join(str(t) for t in table.column_types))
    _out(f"1NF: {'yes' if report.is_1nf else 'no'}")
    for v in report.violations:
        _out(f"violation: {v}")
    for w in report.warnings:
        _err(f"warning: {w}")
    return EXIT_OK if report.is_1nf else EXIT_CELL_ERROR


def cmd_lookup(args) -> int:
    table = _valid_table(args)
    record, row = lookup_record(table, args.by, parse_value(args.value))
    if args.format == "row":
        _out(format_record(row))
    else:
        template = SPEED_SENTENCE if args.by == "speed" else FORCE_SENTENCE
        sentence = build_sentence(template, record)
        _out(_colour(sentence, record, args) if args.format == "colored" else sentence)
    return EXIT_OK


def cmd_sentence(args) -> int:
    table = _valid_table(args)
    if args.template is not None:
        try:
            template = SentenceTemplate(args.template)
        except TemplateError as exc:
            raise InputError(str(exc)) from None
    else:
        template = SPEED_SENTENCE if args.by == "speed" else FORCE_SENTENCE
    record, _ = lookup_record(table, args.by, parse_value(args.value))
    try:
        sentence = build_sentence(template, record)
    except TemplateError as exc:
        raise InputError(str(exc)) from None
    _out(_colour(sentence, record, args))
    return EXIT_OK


def cmd_select(args) -> int:
    table = _valid_table(args)
    cols = _Columns(table)
    try:
        field = find_field(table, args.field)
    except TableError as exc:
        raise InputError(str(exc)) from None
    items = column_vector(table, field)
    mode = lookup.SelectionMode(args.mode)
    linked = lookup.select(items, mode, parse_value(args.choice))
    if mode is lookup.SelectionMode.POSITIONAL:
        # the linked cell holds a position: INDEX(column, position)
        record = {k: lookup.index(vec, linked) for k, vec in cols.vectors.items()}
    else:
        # the linked cell holds the item: INDEX(column, MATCH(item, items, 0))
        record = {k: lookup.index_match(linked, items, vec, lookup.MatchType.EXACT)
                  for k, vec in cols.vectors.items()}
    _out(format_result(linked))
    if args.format == "row":
        _out(format_record(record[k] for k in ("force", "speed", "description",
                                               "specification")))
    else:
        sentence = build_sentence(SELECTION_SENTENCE, record)
        _out(_colour(sentence, record, args) if args.format == "colored" else sentence)
    return EXIT_OK


def cmd_eval(args) -> int:
    try:
        ast = parse_formula(args.formula)
    except FormulaSyntaxError as exc:
        raise InputError(f"formula syntax error: {exc}") from None
    sheet = Sheet()
    table = None if args.no_table else _table(args)
    try:
        if table is not None:
            sheet.bind_table(table, CellRef.parse(args.anchor), header=True)
        for assignment in args.set:
            ref, sep, value = assignment.partition("=")
            if not sep:
                raise InputError(f"--set expects REF=VALUE, got {assignment!r}")
            sheet.set(CellRef.parse(ref), parse_value(value))
    except RefSyntaxError as exc:
        raise InputError(str(exc)) from None
    except CellError as exc:
        raise InputError(f"cannot bind table: {exc.message}") from None
    result = evaluate(ast, sheet)
    _out(format_result(result))
    if isinstance(result, CellError):
        if result.message:
            _err(result.message)
        return EXIT_CELL_ERROR
    return EXIT_OK


def cmd_chart(args) -> int:
    table = _valid_table(args)
    try:
        x_field, y_field = find_field(table, args.x), find_field(table, args.y)
    except TableError as exc:
        raise InputError(str(exc)) from None
    palette = None if args.no_color else _palette(args)
    chart = emit_bar_chart(table, x_field, y_field, args.format, palette)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as f:
            f.write(chart)
    else:
        sys.stdout.write(chart)
    return EXIT_OK


# -- argument parsing ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="webtab",
        description="Convert extracted table text to a datatable and query it "
                    "with spreadsheet lookups.")
    sub = parser.add_subparsers(dest="command", required=True)

    def table_arg(p):
        p.add_argument("--table", help="table file (.csv, .tsv or .json); "
                                       "default: the shipped Beaufort table")

    p = sub.add_parser("convert", help="run a cleanup script over raw text")
    p.add_argument("--script", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output")
    p.add_argument("--format", choices=FORMATS)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("validate", help="check a table for first normal form")
    table_arg(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("lookup", help="find a record by force, speed or description")
    table_arg(p)
    p.add_argument("--by", choices=("force", "speed", "description"), required=True)
    p.add_argument("--value", required=True)
    p.add_argument("--format", choices=("row", "sentence", "colored"), default="row")
    p.add_argument("--color", choices=("ansi", "hex", "plain"), default="ansi")
    p.add_argument("--palette")
    p.set_defaults(func=cmd_lookup)

    p = sub.add_parser("select", help="drop-down selection by position or by value")
    table_arg(p)
    p.add_argument("--mode", choices=("index", "value"), required=True)
    p.add_argument("--choice", required=True)
    p.add_argument("--field", default="Description")
    p.add_argument("--format", choices=("row", "sentence", "colored"), default="row")
    p.add_argument("--color", choices=("ansi", "hex", "plain"), default="ansi")
    p.add_argument("--palette")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("sentence", help="fill a sentence template from a looked-up record")
    table_arg(p)
    p.add_argument("--by", choices=("force", "speed", "description"), required=True)
    p.add_argument("--value", required=True)
    p.add_argument("--template")
    p.add_argument("--color", choices=("ansi", "hex", "plain"), default="plain")
    p.add_argument("--palette")
    p.set_defaults(func=cmd_sentence)

    p = sub.add_parser("eval", help="evaluate a formula against the table")
    table_arg(p)
    p.add_argument("--no-table", action="store_true", help="start from an empty sheet")
    p.add_argument("--anchor", default="A1")
    p.add_argument("--set", action="append", default=[], metavar="REF=VALUE")
    p.add_argument("formula")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("chart", help="bar chart of one field against another")
    table_arg(p)
    p.add_argument("--x", default="Force")
    p.add_argument("--y", default="Speed")
    p.add_argument("--format", choices=("ascii", "svg"), default="ascii")
    p.add_argument("--palette")
    p.add_argument("--no-color", action="store_true")
    p.add_argument("--out", dest="output")
    p.set_defaults(func=cmd_chart)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        _err(f"error: {exc}")
        return EXIT_INPUT_ERROR
    except CellError as exc:
        _out(str(exc.kind))
        if exc.message:
            _err(exc.message)
        return EXIT_CELL_ERROR


if __name__ == "__main__":
    sys.exit(main())
