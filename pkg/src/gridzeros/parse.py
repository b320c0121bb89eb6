"""Parser for polynomial expression strings.

Grammar: terms joined by + and -; a term is *-separated factors with an
optional / by a constant; a factor is a number, a variable, or a
parenthesized expression, optionally raised to a nonnegative integer power
with ^.  Parenthesized groups are expanded.  Numbers may be integers,
fractions (1/2), imaginary quantities (2/3i, i), and complex literals are
formed by grouping, e.g. (1+2i)/5.  Variable names match
[a-zA-Z][a-zA-Z0-9_']*.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .poly import MPoly
from .scalars import GaussRat


class PolyParseError(ValueError):
    """Syntax or variable error, carrying the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?i?|i)|(?P<var>[a-zA-Z][a-zA-Z0-9_']*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise PolyParseError(f"unexpected character {text[pos]!r}", pos)
            break
        if m.group("num") == "i":
            tokens.append(("num", GaussRat(0, 1), m.start("num")))
        elif m.group("num"):
            s = m.group("num")
            if s.endswith("i"):
                tokens.append(("num", GaussRat(0, Fraction(s[:-1])), m.start("num")))
            else:
                tokens.append(("num", GaussRat(Fraction(s)), m.start("num")))
        elif m.group("var"):
            tokens.append(("var", m.group("var"), m.start("var")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.tokens = _tokenize(text)
        self.k = 0
        self.variables = tuple(variables)

    def peek(self):
        return self.tokens[self.k]

    def take(self):
        t = self.tokens[self.k]
        self.k += 1
        return t

    def expect_op(self, op: str):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise PolyParseError(f"expected {op!r}", pos)

    def parse(self) -> MPoly:
        p = self.expr()
        kind, _, pos = self.peek()
        if kind != "end":
            raise PolyParseError("trailing input", pos)
        return p

    def expr(self) -> MPoly:
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        total = self.term() * sign
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                nxt = self.term()
                total = total - nxt if val == "-" else total + nxt
            else:
                return total

    def term(self) -> MPoly:
        total = self.factor()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == "*":
                self.take()
                total = total * self.factor()
            elif kind == "op" and val == "/":
                self.take()
                divisor = self.factor()
                if not divisor.is_constant():
                    raise PolyParseError("can only divide by a constant", pos)
                c = divisor.constant_value()
                if c.is_zero():
                    raise PolyParseError("division by zero", pos)
                total = total * c.inverse()
            else:
                return total

    def factor(self) -> MPoly:
        base = self.base()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "num" or val.im != 0 or val.re.denominator != 1 or val.re < 0:
                raise PolyParseError("exponent must be a nonnegative integer", pos)
            return base ** int(val.re)
        return base

    def base(self) -> MPoly:
        kind, val, pos = self.take()
        if kind == "num":
            return MPoly.constant(val, self.variables)
        if kind == "var":
            if val not in self.variables:
                raise PolyParseError(f"unknown variable {val!r}", pos)
            return MPoly.var(val, self.variables)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        if kind == "op" and val == "-":
            return -self.base()
        raise PolyParseError("expected a number, variable, or group", pos)


def parse_poly(text: str, variables: Sequence[str]) -> MPoly:
    """Parse an expression string into an MPoly over the given variables."""
    return _Parser(text, variables).parse()
