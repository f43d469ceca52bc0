"""Recursive-descent parser for rational expressions.

Grammar (whitespace insignificant)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | atom ('^' integer)?
    atom   := identifier | rational-literal | '(' expr ')'

Rational literals are integers or finite decimals (``0.25``); they are
converted exactly.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .ratexpr import RatExpr


class ParseError(ValueError):
    """Malformed expression text; ``pos`` is the 0-based character offset."""

    def __init__(self, message: str, pos: int, text: str = ""):
        super().__init__(f"{message} at position {pos}")
        self.message = message
        self.pos = pos
        self.text = text


class UnknownIdentifierError(ParseError):
    pass


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, coords: Sequence[str]):
        self.text = text
        self.coords = {name: i for i, name in enumerate(coords)}
        self.nvars = len(coords)
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str) -> None:
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            what = "end of input" if kind == "end" else repr(val)
            raise ParseError(f"expected {op!r}, found {what}", pos, self.text)

    def parse(self) -> RatExpr:
        result = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {val!r}", pos, self.text)
        return result

    def expr(self) -> RatExpr:
        acc = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                acc = acc + rhs if val == "+" else acc - rhs
            else:
                return acc

    def term(self) -> RatExpr:
        acc = self.factor()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs_pos = self.peek()[2]
                rhs = self.factor()
                if val == "*":
                    acc = acc * rhs
                else:
                    if rhs.is_zero():
                        raise ZeroDivisionError(f"division by zero at position {rhs_pos}")
                    acc = acc / rhs
            else:
                return acc

    def factor(self) -> RatExpr:
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return -self.factor()
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            sign = 1
            kind, val, pos = self.peek()
            if kind == "op" and val == "-":
                self.take()
                sign = -1
                kind, val, pos = self.peek()
            if kind != "num" or not val.isdigit():
                raise ParseError("expected integer exponent", pos, self.text)
            self.take()
            k = sign * int(val)
            if k < 0 and base.is_zero():
                raise ZeroDivisionError(f"negative power of zero at position {pos}")
            return base**k
        return base

    def atom(self) -> RatExpr:
        kind, val, pos = self.take()
        if kind == "num":
            return RatExpr.const(self.nvars, Fraction(val))
        if kind == "ident":
            if val not in self.coords:
                raise UnknownIdentifierError(f"unknown identifier {val!r}", pos, self.text)
            return RatExpr.var(self.nvars, self.coords[val])
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        what = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"unexpected {what}", pos, self.text)


def parse(text: str, coords: Sequence[str]) -> RatExpr:
    """Parse ``text`` into a canonical :class:`RatExpr` over ``coords``."""
    if len(set(coords)) != len(coords):
        raise ValueError("coordinate names must be distinct")
    return _Parser(text, coords).parse()
