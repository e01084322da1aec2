"""Text syntax for combinations of forests (or ordered words) of labeled trees.

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := factor ('*' factor)*
    factor  := int ['/' int] | '(' scalar ')' | variable ['^' int] | forest
    forest  := tree (('·'|'.') tree)*

Only the last factor of a term may be a forest; the others are scalars.  A
term without a forest is a multiple of the empty forest, printed ``1``.
Columns in errors are 1-based; lines count from 1.
"""
from __future__ import annotations

import re
from typing import Callable, Hashable, Iterable

from .freemod import LinComb, accumulate
from .prelie import Tree, TreeSyntaxError, parse_tree
from .scalars import RATIONAL, TRUNCATED, RingSpec

FOREST_SEP = "·"
_SEPARATORS = (FOREST_SEP, ".")
_NUMBER = re.compile(r"\d+(?:/\d+)?")
_LABEL = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_EXPONENT = re.compile(r"\^(\d+)")


class ExpressionSyntaxError(SyntaxError):
    def __init__(self, message: str, src: str, offset: int) -> None:
        line = src.count("\n", 0, offset) + 1
        column = offset - (src.rfind("\n", 0, offset) + 1) + 1
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnknownLabel(ValueError):
    def __init__(self, label: str, column: int) -> None:
        super().__init__(f"unknown label {label!r} (column {column})")
        self.label = label
        self.column = column


class _Parser:
    def __init__(self, src: str, ring: RingSpec, labels: Iterable[str] | None, ordered: bool) -> None:
        self.src = src
        self.ring = ring
        self.labels = None if labels is None else set(labels)
        self.ordered = ordered
        self.pos = 0

    def fail(self, message: str, offset: int | None = None) -> None:
        raise ExpressionSyntaxError(message, self.src, self.pos if offset is None else offset)

    def skip(self) -> None:
        while self.pos < len(self.src) and self.src[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.src[self.pos] if self.pos < len(self.src) else ""

    def parse(self) -> LinComb:
        ring = self.ring
        acc: dict = {}
        self.skip()
        if not self.peek():
            self.fail("empty expression")
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        while True:
            self.skip()
            coeff, key = self.term()
            accumulate(ring, acc, key, coeff if sign > 0 else ring.neg(coeff))
            self.skip()
            ch = self.peek()
            if not ch:
                break
            if ch not in "+-":
                self.fail(f"expected '+' or '-', found {ch!r}")
            sign = -1 if ch == "-" else 1
            self.pos += 1
        return LinComb(ring, acc, _clean=True)

    def term(self) -> tuple:
        ring = self.ring
        coeff = ring.one
        while True:
            self.skip()
            start = self.pos
            kind, value = self.factor()
            self.skip()
            more = self.peek() == "*"
            if kind == "forest":
                if more:
                    self.fail("a forest must be the last factor of a term", start)
                return coeff, value
            coeff = ring.mul(coeff, value)
            if not more:
                return coeff, ()
            self.pos += 1

    def scalar_text(self, text: str, offset: int):
        try:
            return self.ring.parse_scalar(text)
        except ValueError as exc:
            m = re.search(r"column (\d+)", str(exc))
            inner = int(m.group(1)) - 1 if m else 0
            msg = str(exc).split(": ", 1)[-1]
            self.fail(f"bad scalar: {msg}", offset + inner)

    def factor(self) -> tuple[str, object]:
        src, ch = self.src, self.peek()
        if not ch:
            self.fail("expected a term")
        if ch.isdigit():
            m = _NUMBER.match(src, self.pos)
            self.pos = m.end()
            return "scalar", self.scalar_text(m.group(0), m.start())
        if ch == "(":
            depth, j = 0, self.pos
            while j < len(src):
                if src[j] == "(":
                    depth += 1
                elif src[j] == ")":
                    depth -= 1
                    if depth == 0:
                        break
                j += 1
            if j >= len(src):
                self.fail("unclosed '('")
            value = self.scalar_text(src[self.pos + 1:j], self.pos + 1)
            self.pos = j + 1
            return "scalar", value
        if not _LABEL.match(src, self.pos):
            self.fail(f"unexpected {ch!r}")
        var = self.variable_factor()
        if var is not None:
            return "scalar", var
        trees = [self.tree()]
        while True:
            save = self.pos
            self.skip()
            if self.peek() in _SEPARATORS and self.peek():
                self.pos += 1
                self.skip()
                trees.append(self.tree())
            else:
                self.pos = save
                break
        return "forest", tuple(trees) if self.ordered else tuple(sorted(trees))

    def variable_factor(self):
        """A ring variable used as a scalar factor (it must be followed by ``*`` or ``^``)."""
        ring = self.ring
        if ring.kind != TRUNCATED:
            return None
        m = _LABEL.match(self.src, self.pos)
        if m.group(0) not in ring.variables:
            return None
        end = m.end()
        e = _EXPONENT.match(self.src, end)
        rest = self.src[(e.end() if e else end):].lstrip()
        if not e and not rest.startswith("*"):
            return None
        self.pos = e.end() if e else end
        return self.scalar_text(self.src[m.start():self.pos], m.start())

    def tree(self) -> Tree:
        start = self.pos
        try:
            t, end = parse_tree(self.src, self.pos)
        except TreeSyntaxError as exc:
            self.fail(str(exc).rsplit(" (column", 1)[0], exc.column - 1)
        if self.labels is not None:
            bad = sorted(t.labels() - self.labels)
            if bad:
                raise UnknownLabel(bad[0], start + 1)
        self.pos = end
        return t


def parse_expression(src: str, ring: RingSpec | None = None, labels: Iterable[str] | None = None, *, ordered: bool = False) -> LinComb:
    """Parse ``src`` into a combination keyed by forests (sorted tuples of trees).

    With ``ordered=True`` the trees of a term keep their written order, which
    is what word-valued inputs need.  ``labels`` restricts the allowed vertex
    labels.
    """
    return _Parser(src, ring or RingSpec.rational(), labels, ordered).parse()


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

def format_forest(key: Iterable[Tree]) -> str:
    return f" {FOREST_SEP} ".join(str(t) for t in key)


def _format_coeff(ring: RingSpec, c) -> tuple[bool, str]:
    """``(negative, magnitude text)``; parenthesized when it is a polynomial."""
    text = ring.format(c)
    if ring.kind == RATIONAL and text.startswith("-"):
        return True, text[1:]
    if ring.kind == TRUNCATED and not text.isdigit():
        return False, f"({text})"
    return False, text


def format_lincomb(e: LinComb, key_text: Callable[[Hashable], str], sort_key: Callable | None = None) -> str:
    """Render ``e`` as ``c1*k1 + c2*k2 ...``; an empty key text stands for 1."""
    if e.is_zero():
        return "0"
    items = sorted(e.items(), key=(lambda kv: sort_key(kv[0])) if sort_key else (lambda kv: kv[0]))
    out = []
    for i, (k, c) in enumerate(items):
        neg, mag = _format_coeff(e.ring, c)
        body = key_text(k)
        if not body:
            piece = mag
        elif mag == "1":
            piece = body
        else:
            piece = f"{mag}*{body}"
        if i == 0:
            out.append(f"-{piece}" if neg else piece)
        else:
            out.append(f" - {piece}" if neg else f" + {piece}")
    return "".join(out)


def format_expression(e: LinComb) -> str:
    """Inverse of :func:`parse_expression` for forest-keyed combinations."""
    return format_lincomb(e, format_forest)
