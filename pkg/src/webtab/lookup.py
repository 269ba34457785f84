"""Spreadsheet lookup semantics: MATCH, INDEX, INDEX(MATCH()) and drop-down selection.

Positions are 1-based throughout.  Failures raise :class:`~webtab.errors.CellError`
carrying the spreadsheet error kind (#N/A, #VALUE!, #REF!).
"""

from __future__ import annotations

import enum
import math
from typing import Sequence

from .errors import CellError, na, ref_error, value_error
from .table import CellValue, is_number


class MatchType(enum.IntEnum):
    EXACT = 0
    ASCENDING = 1   # largest value <= lookup on ascending data; the MATCH default


class SelectionMode(enum.Enum):
    POSITIONAL = "index"   # Form Control: the linked cell gets the item's position
    BY_VALUE = "value"     # ActiveX Control: the linked cell gets the item itself


class QueryKind(enum.Enum):
    EXACT = "exact"
    BANDED = "banded"


def _equal(a: CellValue, b: CellValue) -> bool:
    if a is None or b is None:
        return False
    if is_number(a) and is_number(b):
        return a == b
    if isinstance(a, str) and isinstance(b, str):
        return a.casefold() == b.casefold()
    return False


def match_exact(value: CellValue, vector: Sequence[CellValue]) -> int:
    """Linear search: position of the first element equal to *value*.

    Numbers compare numerically, texts case-insensitively; empty cells
    never match.
    """
    if value is None:
        raise value_error("empty lookup value", value)
    for i, item in enumerate(vector, start=1):
        if _equal(value, item):
            return i
    raise na(f"{value!r} not found", value)


def check_ascending(vector: Sequence[CellValue]) -> None:
    """Raise #VALUE! unless *vector* is all numbers in non-decreasing order."""
    prev = None
    for i, item in enumerate(vector, start=1):
        if not is_number(item):
            raise value_error(f"element {i} ({item!r}) is not a number", item)
        if prev is not None and item < prev:
            raise value_error(f"vector not sorted at position {i}", item)
        prev = item


def is_ascending(vector: Sequence[CellValue]) -> bool:
    try:
        check_ascending(vector)
    except CellError:
        return False
    return True


def match_ascending(value: CellValue, vector: Sequence[CellValue]) -> int:
    """Binary search: the largest position whose element is <= *value*.

    With runs of equal elements the last position of the run is returned.
    """
    if not is_number(value):
        raise value_error(f"lookup value {value!r} is not a number", value)
    check_ascending(vector)
    if not vector or value < vector[0]:
        raise na(f"{value!r} is below the first element", value)
    # invariant: vector[lo] <= value, and everything from hi on is > value
    lo, hi = 0, len(vector)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if vector[mid] <= value:
            lo = mid
        else:
            hi = mid
    return lo + 1


def match(value: CellValue, vector: Sequence[CellValue],
          mtype: MatchType = MatchType.ASCENDING) -> int:
    if MatchType(mtype) is MatchType.EXACT:
        return match_exact(value, vector)
    return match_ascending(value, vector)


def index(vector: Sequence[CellValue], position) -> CellValue:
    if not is_number(position):
        raise value_error(f"position {position!r} is not a number", position)
    if not math.isfinite(position) or position != int(position):
        raise value_error(f"position {position!r} is not an integer", position)
    position = int(position)
    if not 1 <= position <= len(vector):
        raise ref_error(f"position {position} outside 1..{len(vector)}", position)
    return vector[position - 1]


def index_match(lookup: CellValue, search_vector: Sequence[CellValue],
                result_vector: Sequence[CellValue],
                mtype: MatchType = MatchType.EXACT) -> CellValue:
    """``INDEX(result_vector, MATCH(lookup, search_vector, mtype))``."""
    if len(search_vector) != len(result_vector):
        raise ref_error(
            f"vector lengths differ ({len(search_vector)} vs {len(result_vector)})")
    return index(result_vector, match(lookup, search_vector, mtype))


def choose_algorithm(vector: Sequence[CellValue], query_kind: QueryKind | str) -> MatchType:
    """Pick the search for a query: linear for membership, binary for banded ranges.

    Banded queries need ascending numeric data; otherwise #VALUE! is raised
    and the caller has to sort first.
    """
    query_kind = QueryKind(query_kind)
    if query_kind is QueryKind.EXACT:
        return MatchType.EXACT
    check_ascending(vector)
    return MatchType.ASCENDING


def select(items: Sequence[CellValue], mode: SelectionMode | str, choice) -> int | CellValue:
    mode = SelectionMode(mode)
    if (not is_number(choice) or not math.isfinite(choice) or choice != int(choice)
            or not 1 <= choice <= len(items)):
        raise ref_error(f"choice {choice!r} outside 1..{len(items)}", choice)
    choice = int(choice)
    if mode is SelectionMode.POSITIONAL:
        return choice
    return items[choice - 1]
