"""Parse the printed forms of Q(q) elements and x-polynomials back into values.

Grammar (``^`` and ``**`` both mean power, exponents are nonnegative
integer literals)::

    expr  := term (("+" | "-") term)*
    term  := unary (("*" | "/") unary)*
    unary := ("+" | "-") unary | power
    power := atom (("^" | "**") INT)?
    atom  := INT | "q" | "x" | "(" expr ")"
"""

from __future__ import annotations

import re

from .core import XPolynomial
from .field import Q, QRationalFunction

_TOKEN = re.compile(r"\s*(?:(\d+)|(\*\*|[-+*/^()])|([qx]))")


class ParseError(ValueError):
    pass


def _tokenize(text: str) -> list[str]:
    text = text.replace("−", "-").strip()
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        tokens.append(m.group(1) or m.group(2) or m.group(3))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ParseError(f"expected {expected or 'token'}, got {tok!r}")
        self.pos += 1
        return tok

    def parse(self) -> XPolynomial:
        if not self.tokens:
            raise ParseError("empty expression")
        value = self.expr()
        if self.peek() is not None:
            raise ParseError(f"trailing input at token {self.peek()!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise ParseError("division by zero")
                try:
                    value = value / rhs
                except ValueError as exc:
                    raise ParseError(str(exc)) from None
        return value

    def unary(self):
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() in ("^", "**"):
            self.take()
            tok = self.take()
            if not tok.isdigit():
                raise ParseError(f"exponent must be a nonnegative integer, got {tok!r}")
            return base ** int(tok)
        return base

    def atom(self):
        tok = self.take()
        if tok.isdigit():
            return XPolynomial.constant(int(tok))
        if tok == "q":
            return XPolynomial.constant(Q)
        if tok == "x":
            return XPolynomial.x()
        if tok == "(":
            value = self.expr()
            self.take(")")
            return value
        raise ParseError(f"unexpected token {tok!r}")


def parse_xpolynomial(text: str) -> XPolynomial:
    return _Parser(text).parse()


def parse_rational_function(text: str) -> QRationalFunction:
    value = parse_xpolynomial(text)
    if value.degree > 0:
        raise ParseError(f"expression depends on x: {text!r}")
    return value.coefficient(0)
