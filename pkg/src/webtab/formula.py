"""Parser, printer and evaluator for a small spreadsheet formula language.

Grammar::

    formula  := '=' expr
    expr     := concat
    concat   := additive ('&' additive)*
    additive := primary (('+' | '-') primary)*
    primary  := number | string | cellref | range | call | '(' expr ')'

Functions: INDEX, MATCH, LEFT, RIGHT, LEN and UPPER (names are
case-insensitive).  Strings are double-quoted with ``""`` for a quote.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

from . import lookup
from .errors import CellError, value_error
from .sheet import MAX_COLUMN, CellRef, RangeRef, Sheet, column_index
from .table import CellValue, format_number, is_number
from .text import simple_upper

# name -> (min args, max args)
FUNCTIONS = {
    "INDEX": (2, 2),
    "MATCH": (2, 3),
    "LEFT": (1, 2),
    "RIGHT": (1, 2),
    "LEN": (1, 1),
    "UPPER": (1, 1),
}


@dataclass(frozen=True)
class NumberLit:
    value: Union[int, float]


@dataclass(frozen=True)
class StringLit:
    value: str


@dataclass(frozen=True)
class Ref:
    ref: CellRef


@dataclass(frozen=True)
class Range:
    range: RangeRef


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


@dataclass(frozen=True)
class Concat:
    left: object
    right: object


@dataclass(frozen=True)
class Add:
    left: object
    right: object


@dataclass(frozen=True)
class Sub:
    left: object
    right: object


Node = Union[NumberLit, StringLit, Ref, Range, Call, Concat, Add, Sub]


class FormulaSyntaxError(ValueError):
    """``offset`` is a byte offset into the UTF-8 formula text."""

    def __init__(self, message: str, offset: int, expected=()):
        self.message = message
        self.offset = offset
        self.expected = frozenset(expected)
        text = f"{message} at offset {offset}"
        if self.expected:
            text += f" (expected {', '.join(sorted(self.expected))})"
        super().__init__(text)


# -- tokenizer ------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<number>\d+(?:\.\d+)?)
  | (?P<string>"(?:[^"]|"")*")
  | (?P<word>[A-Za-z]+\d*)
  | (?P<op>[(),:&+-])
""", re.VERBOSE)

_PRIMARY_START = ("number", "string", "reference", "function", "'('")


@dataclass
class _Token:
    kind: str       # number, string, word, one of the operator characters, or eof
    text: str
    pos: int        # character offset


def _tokenize(text: str, start: int):
    tokens = []
    pos = start
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos] == '"':
                raise FormulaSyntaxError("unterminated string", _byte_offset(text, pos))
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}",
                                     _byte_offset(text, pos))
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Token(m[0] if kind == "op" else kind, m[0], pos))
        pos = m.end()
    tokens.append(_Token("eof", "", len(text)))
    return tokens


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text, 1)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def error(self, message, expected=(), tok=None):
        tok = tok or self.tok
        return FormulaSyntaxError(message, _byte_offset(self.text, tok.pos), expected)

    def take(self, kind: str, expected=None) -> _Token:
        tok = self.tok
        if tok.kind != kind:
            found = "end of formula" if tok.kind == "eof" else repr(tok.text)
            raise self.error(f"unexpected {found}", expected or (f"'{kind}'",))
        self.i += 1
        return tok

    def formula(self) -> Node:
        node = self.expr()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}", ("'&'", "'+'", "'-'", "end"))
        return node

    def expr(self) -> Node:
        left = self.additive()
        while self.tok.kind == "&":
            self.i += 1
            left = Concat(left, self.additive())
        return left

    def additive(self) -> Node:
        left = self.primary()
        while self.tok.kind in ("+", "-"):
            op = self.take(self.tok.kind)
            right = self.primary()
            left = Add(left, right) if op.kind == "+" else Sub(left, right)
        return left

    def primary(self) -> Node:
        tok = self.tok
        if tok.kind == "number":
            self.i += 1
            return NumberLit(float(tok.text) if "." in tok.text else int(tok.text))
        if tok.kind == "string":
            self.i += 1
            return StringLit(tok.text[1:-1].replace('""', '"'))
        if tok.kind == "(":
            self.i += 1
            node = self.expr()
            self.take(")", ("')'", "'&'", "'+'", "'-'"))
            return node
        if tok.kind == "word":
            self.i += 1
            if self.tok.kind == "(":
                return self.call(tok)
            start = self.cellref(tok)
            if self.tok.kind == ":":
                self.i += 1
                end = self.cellref(self.take("word", ("reference",)))
                return Range(RangeRef(start, end))
            return Ref(start)
        found = "end of formula" if tok.kind == "eof" else repr(tok.text)
        raise self.error(f"unexpected {found}", _PRIMARY_START)

    def cellref(self, tok: _Token) -> CellRef:
        m = re.fullmatch(r"([A-Za-z]{1,2})([1-9]\d*)", tok.text)
        if not m or column_index(m[1]) > MAX_COLUMN:
            raise self.error(f"invalid cell reference {tok.text!r}", ("reference",), tok)
        return CellRef(int(m[2]), column_index(m[1]))

    def call(self, name_tok: _Token) -> Call:
        name = name_tok.text.upper()
        if name not in FUNCTIONS:
            raise self.error(f"unknown function {name_tok.text!r}", tuple(FUNCTIONS), name_tok)
        self.take("(")
        args = []
        if self.tok.kind == ")":
            self.i += 1
        else:
            args.append(self.expr())
            while self.tok.kind == ",":
                self.i += 1
                args.append(self.expr())
            self.take(")", ("','", "')'"))
        lo, hi = FUNCTIONS[name]
        if not lo <= len(args) <= hi:
            want = str(lo) if lo == hi else f"{lo} to {hi}"
            raise self.error(f"{name} takes {want} arguments, got {len(args)}", (), name_tok)
        return Call(name, tuple(args))


def parse_formula(text: str) -> Node:
    """Parse ``"=..."`` into an AST; raises :class:`FormulaSyntaxError`."""
    if not text.startswith("="):
        raise FormulaSyntaxError("formula must start with '='", 0, ("'='",))
    return _Parser(text).formula()


# -- printer --------------------------------------------------------------------

def _precedence(node: Node) -> int:
    if isinstance(node, Concat):
        return 1
    if isinstance(node, (Add, Sub)):
        return 2
    return 3


def _print(node: Node) -> str:
    if isinstance(node, NumberLit):
        if node.value < 0:
            raise ValueError("negative literals have no formula syntax")
        return format_number(node.value)
    if isinstance(node, StringLit):
        return '"' + node.value.replace('"', '""') + '"'
    if isinstance(node, Ref):
        return str(node.ref)
    if isinstance(node, Range):
        return str(node.range)
    if isinstance(node, Call):
        return f"{node.name}({','.join(_print(a) for a in node.args)})"
    op = {Concat: "&", Add: "+", Sub: "-"}[type(node)]
    prec = _precedence(node)
    left, right = _print(node.left), _print(node.right)
    # operators are left-associative: a right operand of equal precedence needs parens
    if _precedence(node.left) < prec:
        left = f"({left})"
    if _precedence(node.right) <= prec:
        right = f"({right})"
    return f"{left}{op}{right}"


def to_formula(node: Node) -> str:
    """Canonical text for *node*; parsing it gives back an equal AST."""
    return "=" + _print(node)


# -- evaluator ------------------------------------------------------------------

def _as_text(value: CellValue) -> str:
    if value is None:
        return ""
    if is_number(value):
        return format_number(value)
    return value


def _as_number(value: CellValue):
    if value is None:
        return 0
    if is_number(value):
        return value
    raise value_error(f"{value!r} is not a number", value)


def _as_count(value: CellValue) -> int:
    n = _as_number(value)
    if n < 0:
        raise value_error(f"negative character count {n!r}", value)
    return int(n)


class _Evaluator:
    def __init__(self, sheet: Sheet):
        self.sheet = sheet

    def scalar(self, node: Node) -> CellValue:
        if isinstance(node, NumberLit):
            return node.value
        if isinstance(node, StringLit):
            return node.value
        if isinstance(node, Ref):
            return self.sheet.get(node.ref)
        if isinstance(node, Range):
            raise value_error(f"range {node.range} used as a single value")
        if isinstance(node, Concat):
            left = _as_text(self.scalar(node.left))
            return left + _as_text(self.scalar(node.right))
        if isinstance(node, (Add, Sub)):
            left = _as_number(self.scalar(node.left))
            right = _as_number(self.scalar(node.right))
            result = left + right if isinstance(node, Add) else left - right
            if not math.isfinite(result):
                raise value_error("arithmetic overflow")
            return result
        if isinstance(node, Call):
            return getattr(self, "call_" + node.name.lower())(*node.args)
        raise TypeError(f"not a formula node: {node!r}")

    def vector(self, node: Node) -> list[CellValue]:
        if isinstance(node, Range):
            return self.sheet.vector(node.range)
        if isinstance(node, Ref):
            return [self.sheet.get(node.ref)]
        raise value_error("expected a range")

    def call_index(self, vec, pos):
        vector = self.vector(vec)
        return lookup.index(vector, self.scalar(pos))

    def call_match(self, value, vec, mtype=None):
        value = self.scalar(value)
        vector = self.vector(vec)
        kind = lookup.MatchType.ASCENDING
        if mtype is not None:
            t = _as_number(self.scalar(mtype))
            if t not in (0, 1):
                raise value_error(f"unsupported match type {t!r}", t)
            kind = lookup.MatchType(int(t))
        return lookup.match(value, vector, kind)

    def call_left(self, s, n=None):
        s = _as_text(self.scalar(s))
        count = 1 if n is None else _as_count(self.scalar(n))
        return s[:count]

    def call_right(self, s, n=None):
        s = _as_text(self.scalar(s))
        count = 1 if n is None else _as_count(self.scalar(n))
        return s[len(s) - count:] if count < len(s) else s

    def call_len(self, s):
        return len(_as_text(self.scalar(s)))

    def call_upper(self, s):
        return simple_upper(_as_text(self.scalar(s)))


def evaluate(node: Node, sheet: Sheet) -> CellValue | CellError:
    """Evaluate *node* against *sheet*.

    Spreadsheet errors are returned, not raised: the first error met in
    left-to-right, innermost-first order becomes the result.
    """
    try:
        return _Evaluator(sheet).scalar(node)
    except CellError as err:
        return err


def format_result(value: CellValue | CellError) -> str:
    if isinstance(value, CellError):
        return str(value.kind)
    return _as_text(value)
