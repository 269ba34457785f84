"""Turn extracted table text into first-normal-form datatables and query them
with spreadsheet lookups (MATCH, INDEX, INDEX(MATCH())) and a small formula
language."""

from .cleanse import CleanupScript, parse_script, run_script
from .errors import CellError, ErrorKind
from .formula import evaluate, parse_formula, to_formula
from .lookup import MatchType, SelectionMode, index, index_match, match_ascending, match_exact
from .sheet import CellRef, RangeRef, Sheet
from .table import ColumnType, Datatable, validate_1nf

__version__ = "0.1.0"

__all__ = [
    "CellError", "CellRef", "CleanupScript", "ColumnType", "Datatable", "ErrorKind",
    "MatchType", "RangeRef", "SelectionMode", "Sheet", "evaluate", "index", "index_match",
    "match_ascending", "match_exact", "parse_formula", "parse_script", "run_script",
    "to_formula", "validate_1nf",
]
