"""The Beaufort wind scale fixtures shipped with the package.

``beaufort_raw.txt`` is the scale as a word-processor table saved as text:
force and speed range share the first cell on two paragraphs, and the
other cell borders are vertical bars.  ``beaufort.cleanup`` turns it into
the 13-record datatable; ``beaufort_palette.csv`` holds the band colours.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .cleanse import AuditLog, CleanupScript, parse_script, run_script
from .style import BandPalette, read_palette
from .table import Datatable


def data_path(name: str):
    return resources.files(__package__).joinpath("data", name)


def read_text(name: str) -> str:
    return data_path(name).read_text(encoding="utf-8")


def raw_text() -> str:
    return read_text("beaufort_raw.txt")


def cleanup_script() -> CleanupScript:
    return parse_script(read_text("beaufort.cleanup"))


def convert() -> tuple[Datatable, AuditLog]:
    return run_script(cleanup_script(), raw_text())


@lru_cache(maxsize=None)
def table() -> Datatable:
    return convert()[0]


@lru_cache(maxsize=None)
def palette() -> BandPalette:
    with data_path("beaufort_palette.csv").open(encoding="utf-8", newline="") as f:
        return read_palette(f)
