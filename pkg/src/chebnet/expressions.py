"""A tiny arithmetic grammar for inline target functions on the CLI.

Supported: +, -, *, /, ^ (right-associative power), unary minus, parentheses,
the variable x, numeric literals, the constants pi and e, and the functions
exp, sin, cos.  Parsed once into a closure over numpy arrays.
"""

from __future__ import annotations

import math
import re

import numpy as np

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)

_FUNCTIONS = {"exp": np.exp, "sin": np.sin, "cos": np.cos}
_CONSTANTS = {"pi": math.pi, "e": math.e}


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse expression at: {text[pos:]!r}")
        pos = m.end()
        if m.group("num") is not None:
            tokens.append(("num", float(m.group("num"))))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name")))
        else:
            tokens.append(("op", m.group("op")))
    tokens.append(("end", None))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, value = self.take()
        if kind != "op" or value != op:
            raise ValueError(f"expected {op!r}")

    # sum -> term (('+'|'-') term)*
    def sum(self):
        node = self.term()
        while self.peek() == ("op", "+") or self.peek() == ("op", "-"):
            _, op = self.take()
            rhs = self.term()
            node = (lambda f, g: (lambda x: f(x) + g(x)))(node, rhs) if op == "+" else \
                   (lambda f, g: (lambda x: f(x) - g(x)))(node, rhs)
        return node

    # term -> unary (('*'|'/') unary)*
    def term(self):
        node = self.unary()
        while self.peek() == ("op", "*") or self.peek() == ("op", "/"):
            _, op = self.take()
            rhs = self.unary()
            node = (lambda f, g: (lambda x: f(x) * g(x)))(node, rhs) if op == "*" else \
                   (lambda f, g: (lambda x: f(x) / g(x)))(node, rhs)
        return node

    # unary -> '-' unary | power
    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            inner = self.unary()
            return lambda x: -inner(x)
        return self.power()

    # power -> atom ('^' unary)?   (right associative)
    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            exponent = self.unary()
            return lambda x: np.power(base(x), exponent(x))
        return base

    def atom(self):
        kind, value = self.take()
        if kind == "num":
            return lambda x, v=value: np.full_like(np.asarray(x, dtype=float), v)
        if kind == "name":
            if value == "x":
                return lambda x: np.asarray(x, dtype=float)
            if value in _CONSTANTS:
                return lambda x, v=_CONSTANTS[value]: np.full_like(
                    np.asarray(x, dtype=float), v
                )
            if value in _FUNCTIONS:
                self.expect_op("(")
                inner = self.sum()
                self.expect_op(")")
                return lambda x, fn=_FUNCTIONS[value]: fn(inner(x))
            raise ValueError(f"unknown name {value!r}")
        if kind == "op" and value == "(":
            inner = self.sum()
            self.expect_op(")")
            return inner
        raise ValueError(f"unexpected token {value!r}")


def parse_expression(text: str):
    """Compile an expression over x into a vectorized callable."""
    parser = _Parser(_tokenize(text))
    fn = parser.sum()
    if parser.peek() != ("end", None):
        raise ValueError("trailing input after expression")
    fn(np.array([0.5]))  # fail fast on malformed expressions
    return fn
