"""Recursive descent parser for the expression grammar

    expr    := term (("+"|"-") term)*
    term    := factor (("*"|"/") factor)*
    factor  := "-" factor | primary ("^" integer)?
    primary := number | "i" | "t" | ident "(" expr ")" | "(" expr ")"
"""

import re

from ..errors import ExprSyntaxError, NonIntegerExponent, UnknownFunction
from .expr import Add, Apply, Div, I, Lit, Mul, Neg, Pow, Sub, Var
from .jet import FUNCTIONS

_NUMBER = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
_INTEGER = re.compile(r"\d+")
_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg, pos=None, cls=ExprSyntaxError):
        pos = self.pos if pos is None else pos
        return cls(msg, len(self.text[:pos].encode("utf-8")), self.text)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            found = repr(self.peek()) if self.peek() else "end of input"
            raise self.error(f"expected {ch!r}, found {found}")
        self.pos += 1

    def parse(self):
        e = self.expr()
        if self.peek():
            raise self.error(f"unexpected {self.peek()!r}")
        return e

    def expr(self):
        e = self.term()
        while self.peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            rhs = self.term()
            e = Add(e, rhs) if op == "+" else Sub(e, rhs)
        return e

    def term(self):
        e = self.factor()
        while self.peek() in ("*", "/"):
            op = self.text[self.pos]
            self.pos += 1
            rhs = self.factor()
            e = Mul(e, rhs) if op == "*" else Div(e, rhs)
        return e

    def factor(self):
        if self.peek() == "-":
            self.pos += 1
            return Neg(self.factor())
        base = self.primary()
        if self.peek() == "^":
            self.pos += 1
            self.skip()
            m = _NUMBER.match(self.text, self.pos)
            if m is None:
                raise self.error("expected integer exponent")
            if not _INTEGER.fullmatch(m.group(0)):
                raise self.error("exponent must be an integer literal", cls=NonIntegerExponent)
            self.pos = m.end()
            return Pow(base, int(m.group(0)))
        return base

    def primary(self):
        ch = self.peek()
        start = self.pos
        if not ch:
            raise self.error("unexpected end of input")
        if ch == "(":
            self.pos += 1
            e = self.expr()
            self.expect(")")
            return e
        m = _NUMBER.match(self.text, self.pos)
        if m:
            self.pos = m.end()
            return Lit(float(m.group(0)))
        m = _NAME.match(self.text, self.pos)
        if m:
            name = m.group(0)
            self.pos = m.end()
            if name == "i":
                return I()
            if name == "t":
                return Var()
            if self.peek() != "(":
                raise self.error(f"unknown identifier {name!r}", start)
            if name not in FUNCTIONS:
                raise self.error(f"unknown function {name!r}", start, UnknownFunction)
            self.pos += 1
            arg = self.expr()
            self.expect(")")
            return Apply(name, arg)
        raise self.error(f"unexpected {ch!r}")


def parse_expr(text: str):
    return _Parser(text).parse()
