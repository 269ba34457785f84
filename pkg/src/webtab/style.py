"""Band colours, coloured text, sentence templates and bar charts."""

from __future__ import annotations

import csv
import string
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence
from xml.sax.saxutils import escape, quoteattr

from .errors import CellError, ref_error, value_error
from .table import Datatable, Number, format_cell, format_number, is_number
from .text import simple_lower, simple_upper

CHART_WIDTH = 50


@dataclass(frozen=True)
class RgbTriple:
    r: int
    g: int
    b: int

    def __post_init__(self):
        for channel in (self.r, self.g, self.b):
            if not isinstance(channel, int) or not 0 <= channel <= 255:
                raise ValueError(f"colour channel {channel!r} outside 0..255")

    @property
    def hex(self) -> str:
        return f"#{self.r:02X}{self.g:02X}{self.b:02X}"

    def __iter__(self):
        return iter((self.r, self.g, self.b))


@dataclass(frozen=True)
class Band:
    force: int
    lower_speed: Number
    rgb: RgbTriple


@dataclass(frozen=True)
class BandPalette:
    bands: tuple[Band, ...]

    def __post_init__(self):
        object.__setattr__(self, "bands", tuple(self.bands))
        for i, band in enumerate(self.bands):
            if band.force != i:
                raise ValueError(f"forces must run 0, 1, 2, ...; got {band.force} at {i}")
            if i and band.lower_speed <= self.bands[i - 1].lower_speed:
                raise ValueError(f"lower speed of force {band.force} does not increase")

    def __len__(self) -> int:
        return len(self.bands)


def read_palette(stream) -> BandPalette:
    """Read a palette CSV with the header ``force,speed,r,g,b``."""
    reader = csv.DictReader(stream)
    if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != \
            ["force", "speed", "r", "g", "b"]:
        raise ValueError(f"palette header must be force,speed,r,g,b; got {reader.fieldnames}")
    bands = []
    for row in reader:
        try:
            speed = float(row["speed"])
            bands.append(Band(
                int(row["force"]),
                int(speed) if speed.is_integer() else speed,
                RgbTriple(int(row["r"]), int(row["g"]), int(row["b"])),
            ))
        except (TypeError, ValueError) as exc:
            raise ValueError(f"palette line {reader.line_num}: {exc}") from None
    return BandPalette(tuple(bands))


def load_palette(path) -> BandPalette:
    with open(path, newline="", encoding="utf-8") as f:
        return read_palette(f)


def band_for_value(speed: Number, palette: BandPalette) -> int:
    """Force whose [lower_speed, next lower_speed) interval holds *speed*."""
    if not is_number(speed) or speed < 0:
        raise value_error(f"speed {speed!r} must be a number >= 0", speed)
    force = None
    for band in palette.bands:
        if band.lower_speed > speed:
            break
        force = band.force
    if force is None:
        raise value_error(f"speed {speed!r} is below the first band", speed)
    return force


def rgb_for_force(force: int, palette: BandPalette) -> RgbTriple:
    for band in palette.bands:
        if band.force == force:
            return band.rgb
    raise ref_error(f"no colour for force {force!r}", force)


def render_colored(text: str, rgb: RgbTriple, mode: str = "ansi") -> str:
    if mode == "ansi":
        return f"\x1b[38;2;{rgb.r};{rgb.g};{rgb.b}m{text}\x1b[0m"
    if mode == "hex":
        return f"{rgb.hex} {text}"
    if mode == "plain":
        return text
    raise ValueError(f"unknown colour mode {mode!r}")


def capitalize_first(s: str) -> str:
    """Uppercase the first character, as ``UPPER(LEFT(s))&RIGHT(s,LEN(s)-1)`` does."""
    if not s:
        raise value_error("cannot capitalize an empty string", s)
    return simple_upper(s[0]) + s[1:]


def lowercase_first(s: str) -> str:
    return simple_lower(s[:1]) + s[1:]


# -- sentence templates -----------------------------------------------------------

TEMPLATE_FIELDS = ("force", "speed", "description", "specification")
# "!u" capitalizes, "!l" lowercases the first letter of the substituted value
_CONVERSIONS = {None: lambda s: s, "u": capitalize_first, "l": lowercase_first}


class TemplateError(ValueError):
    pass


@dataclass(frozen=True)
class SentenceTemplate:
    """Text with ``{force}``, ``{speed}``, ``{description}`` and ``{specification}``.

    A placeholder may carry ``!u`` or ``!l`` to change the case of the first
    letter of its value, e.g. ``{specification!l}``.
    """

    text: str

    def __post_init__(self):
        for _, name, spec, conversion in self._parts():
            if name is None:
                continue
            if name not in TEMPLATE_FIELDS:
                raise TemplateError(f"unknown placeholder {{{name}}}")
            if spec or conversion not in _CONVERSIONS:
                raise TemplateError(f"unsupported placeholder format in {{{name}}}")

    def _parts(self):
        try:
            return list(string.Formatter().parse(self.text))
        except ValueError as exc:
            raise TemplateError(str(exc)) from None


FORCE_SENTENCE = SentenceTemplate(
    "The speed of force {force} is {speed} km/h, its description: {description}, "
    "its specification: {specification}")
SPEED_SENTENCE = SentenceTemplate(
    "{speed} km/h speed of wind is in force {force}, its description is {description}, "
    "and here {specification!l}")
SELECTION_SENTENCE = SentenceTemplate(
    "{description!u} is force {force}, from {speed} km/h: {specification}")


def build_sentence(template: SentenceTemplate, record: Mapping[str, object]) -> str:
    out = []
    for literal, name, _, conversion in template._parts():
        out.append(literal)
        if name is None:
            continue
        if name not in record or record[name] is None:
            raise TemplateError(f"record has no value for {{{name}}}")
        out.append(_CONVERSIONS[conversion](format_cell(record[name])))
    return "".join(out)


# -- bar chart ------------------------------------------------------------------

def _bar_values(table: Datatable, x_field: str, y_field: str):
    xi, yi = table.field_index(x_field), table.field_index(y_field)
    labels, values = [], []
    for r, rec in enumerate(table.records, start=1):
        if not is_number(rec[yi]):
            raise value_error(f"record {r}: {y_field} value {rec[yi]!r} is not a number",
                              rec[yi])
        labels.append(format_cell(rec[xi]))
        values.append(rec[yi])
    return labels, values


def _scaled(values: Sequence[Number], width: float) -> list[float]:
    top = max(values, default=0)
    if top <= 0:
        return [0.0] * len(values)
    return [max(v, 0) / top * width for v in values]


def emit_bar_chart(table: Datatable, x_field: str, y_field: str, format: str = "ascii",
                   palette: BandPalette | None = None) -> str:
    """One bar per record, in record order, the longest bar at full width.

    With a palette, SVG bars are filled with the colour of their force
    (the x value).
    """
    labels, values = _bar_values(table, x_field, y_field)
    if format == "ascii":
        return _ascii_chart(labels, values)
    if format == "svg":
        colours = None
        if palette is not None:
            xi = table.field_index(x_field)
            colours = [_force_colour(rec[xi], palette) for rec in table.records]
        return _svg_chart(labels, values, x_field, y_field, colours)
    raise ValueError(f"unknown chart format {format!r}")


def _force_colour(force, palette: BandPalette) -> str | None:
    if not is_number(force) or force != int(force):
        return None
    try:
        return rgb_for_force(int(force), palette).hex
    except CellError:
        return None


def _ascii_chart(labels: list[str], values: list[Number]) -> str:
    pad = max((len(label) for label in labels), default=0)
    lines = []
    for label, value, length in zip(labels, values, _scaled(values, CHART_WIDTH)):
        bar = "#" * round(length)
        lines.append(f"{label.rjust(pad)} | {bar} {format_number(value)}".rstrip())
    return "\n".join(lines) + ("\n" if lines else "")


def _svg_chart(labels: list[str], values: list[Number], x_name: str, y_name: str,
               colours: Iterable[str | None] | None) -> str:
    bar_w, gap, plot_h = 28, 8, 200
    left, top, bottom = 40, 30, 40
    n = len(values)
    width = left + n * (bar_w + gap) + gap
    height = top + plot_h + bottom
    colours = list(colours) if colours is not None else [None] * n
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<title>{escape(y_name)} by {escape(x_name)}</title>',
        f'<line x1="{left}" y1="{top + plot_h}" x2="{width - gap}" y2="{top + plot_h}" '
        'stroke="black"/>',
    ]
    for i, (label, value, h) in enumerate(zip(labels, values, _scaled(values, plot_h))):
        x = left + gap + i * (bar_w + gap)
        y = top + plot_h - h
        fill = colours[i] or "#4472C4"
        out.append(
            f'<rect class="bar" x="{x}" y="{y:.2f}" width="{bar_w}" height="{h:.2f}" '
            f'fill="{fill}"><title>{escape(label)}: {format_number(value)}</title></rect>')
        out.append(
            f'<text x="{x + bar_w / 2:g}" y="{top + plot_h + 16}" text-anchor="middle" '
            f'font-size="12">{escape(label)}</text>')
    out.append(f'<text x="{width / 2:g}" y="{height - 6}" text-anchor="middle" '
               f'font-size="12">{escape(x_name)}</text>')
    out.append(f'<text x="4" y="{top - 10}" font-size="12" data-field={quoteattr(y_name)}>'
               f'{escape(y_name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"

