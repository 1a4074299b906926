"""Pratt parser for the expression grammar.

Grammar: infix ``+ - * / ^`` with the usual precedence (``^`` binds tightest
and associates to the right), prefix ``-``, parentheses, the functions
``sin cos exp``, identifiers ``[A-Za-z][A-Za-z0-9_]*`` and rational literals
(integers or decimals).  Exponents must reduce to integers.

>>> str(parse("x2/x1"))
'x2/x1'
>>> parse("x +* 1")
Traceback (most recent call last):
...
goursatkit.expr.parser.ParseError: unexpected '*' at position 3
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable

from .core import FUNCTIONS, ONE, Expr, apply_fn, symbol

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*/^(),]))"
)


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.reason = message


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        start = m.start(m.lastgroup)
        tokens.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


_BINARY = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 40}
_PREFIX = 30


class _Parser:
    def __init__(self, text: str, allowed: set | None):
        self.tokens = _tokenize(text)
        self.i = 0
        self.allowed = allowed

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, text, pos = self.take()
        if text != value or kind != "op":
            raise ParseError(f"expected {value!r}" + (f" but found {text!r}" if text else ""), pos)

    def parse(self):
        node = self.expression(0)
        kind, text, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {text!r}", pos)
        return node

    def expression(self, min_bp: int):
        left = self.prefix()
        while True:
            kind, text, pos = self.peek()
            if kind != "op" or text not in _BINARY:
                break
            bp = _BINARY[text]
            if bp < min_bp or (bp == min_bp and text != "^"):
                break
            self.take()
            # ^ is right associative; the others are left associative
            right = self.expression(bp if text == "^" else bp + 1)
            left = (text, left, right, pos)
        return left

    def prefix(self):
        kind, text, pos = self.take()
        if kind == "num":
            return ("num", Fraction(text), pos)
        if kind == "name":
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "(":
                if text not in FUNCTIONS:
                    raise ParseError(f"unknown function {text!r}", pos)
                self.take()
                arg = self.expression(0)
                self.expect(")")
                return ("call", text, arg, pos)
            if text in FUNCTIONS:
                raise ParseError(f"function {text!r} needs an argument", pos)
            if self.allowed is not None and text not in self.allowed:
                raise ParseError(f"unknown identifier {text!r}", pos)
            return ("sym", text, pos)
        if kind == "op" and text == "-":
            return ("neg", self.expression(_PREFIX), pos)
        if kind == "op" and text == "+":
            return self.expression(_PREFIX)
        if kind == "op" and text == "(":
            inner = self.expression(0)
            self.expect(")")
            return inner
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected {text!r}", pos)


def _exponent(node) -> int:
    value = _build(node)
    if not value.is_const or value.const_value().denominator != 1:
        raise ParseError("exponent must be an integer", node[-1])
    return int(value.const_value())


def _build(node) -> Expr:
    tag = node[0]
    if tag == "num":
        return Expr.const(node[1])
    if tag == "sym":
        return symbol(node[1])
    if tag == "call":
        return apply_fn(node[1], _build(node[2]))
    if tag == "neg":
        return -_build(node[1])
    op, left, right, pos = node
    if op == "+":
        return _build(left) + _build(right)
    if op == "-":
        return _build(left) - _build(right)
    if op == "*":
        return _build(left) * _build(right)
    if op == "/":
        return _build(left) * _build_inverse(right, pos)
    if op == "^":
        n = _exponent(right)
        try:
            return _build(left) ** n
        except ZeroDivisionError:
            raise ParseError("division by zero", pos) from None
    raise AssertionError(tag)


def _build_inverse(node, pos: int) -> Expr:
    # keep (a + b)^2 in a denominator as the square of one base
    try:
        if node[0] == "^":
            return _build(node[1]) ** (-_exponent(node[2]))
        if node[0] == "*":
            return _build_inverse(node[1], pos) * _build_inverse(node[2], pos)
        if node[0] == "neg":
            return -_build_inverse(node[1], pos)
        return _build(node).inverse()
    except ZeroDivisionError:
        raise ParseError("division by zero", pos) from None


def parse(text: str, chart_symbols: Iterable[str] | None = None) -> Expr:
    """Parse ``text``; identifiers must come from ``chart_symbols`` when given."""
    allowed = None if chart_symbols is None else set(chart_symbols)
    return _build(_Parser(text, allowed).parse())


__all__ = ["ParseError", "parse", "ONE"]
