"""Tokenizer, recursive-descent parser and printer for rational expressions in ``z``.

Grammar (loosest binding first)::

    sum     := product (('+' | '-') product)*
    product := unary (('*' | '/') unary)*
    unary   := '-' unary | '+' unary | power
    power   := atom ('^' exponent)?
    exponent:= ('-' | '+')* (atom ('^' exponent)?)

Exponents must reduce to an integer constant. Evaluation is generic over the
number type, so the same tree evaluates on complex numbers, jets, mpmath
values or polynomial objects.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ExprSyntaxError, UnsupportedOperation

_NUMBER = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")


@dataclass(frozen=True)
class Token:
    kind: str  # 'num', 'var', 'op' or 'end'
    text: str
    pos: int
    value: complex = 0j


def tokenize(text):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        m = _NUMBER.match(text, i)
        if m:
            end = m.end()
            value = float(m.group(0))
            if end < n and text[end] == "i" and not (end + 1 < n and (text[end + 1].isalnum() or text[end + 1] == "_")):
                tokens.append(Token("num", text[i:end + 1], i, complex(0.0, value)))
                end += 1
            else:
                tokens.append(Token("num", m.group(0), i, complex(value, 0.0)))
            i = end
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if word == "z":
                tokens.append(Token("var", word, i))
            elif word == "i":
                tokens.append(Token("num", word, i, 1j))
            else:
                raise ExprSyntaxError(f"unknown name {word!r}", i)
            i = j
            continue
        if ch in "+-*/^()":
            tokens.append(Token("op", ch, i))
            i += 1
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(Token("end", "", n))
    return tokens


class Node:
    def evaluate(self, z):
        raise NotImplementedError

    def has_var(self):
        return False


@dataclass(frozen=True)
class Num(Node):
    value: complex

    def evaluate(self, z):
        return self.value

    def to_text(self):
        re_, im = self.value.real, self.value.imag
        if im == 0.0:
            return f"({re_!r})"
        if re_ == 0.0:
            return f"({im!r}i)"
        return f"({re_!r}{'+' if im >= 0 else ''}{im!r}i)"


@dataclass(frozen=True)
class Var(Node):
    def evaluate(self, z):
        return z

    def has_var(self):
        return True

    def to_text(self):
        return "z"


@dataclass(frozen=True)
class Neg(Node):
    arg: Node

    def evaluate(self, z):
        return -self.arg.evaluate(z)

    def has_var(self):
        return self.arg.has_var()

    def to_text(self):
        return f"(-{self.arg.to_text()})"


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node

    def evaluate(self, z):
        a = self.left.evaluate(z)
        b = self.right.evaluate(z)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        return a / b

    def has_var(self):
        return self.left.has_var() or self.right.has_var()

    def to_text(self):
        return f"({self.left.to_text()}{self.op}{self.right.to_text()})"


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: int

    def evaluate(self, z):
        b = self.base.evaluate(z)
        if self.exponent < 0:
            return 1 / (b ** (-self.exponent))
        return b ** self.exponent

    def has_var(self):
        return self.base.has_var()

    def to_text(self):
        return f"({self.base.to_text()}^({self.exponent}))"


class Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def _accept(self, *ops):
        t = self.tok
        if t.kind == "op" and t.text in ops:
            self.i += 1
            return t
        return None

    def _fail(self, what):
        t = self.tok
        found = "end of input" if t.kind == "end" else repr(t.text)
        raise ExprSyntaxError(f"expected {what}, found {found}", t.pos)

    def parse(self):
        if self.tok.kind == "end":
            self._fail("an expression")
        node = self.sum()
        if self.tok.kind != "end":
            self._fail("an operator or end of input")
        return node

    def sum(self):
        node = self.product()
        while True:
            t = self._accept("+", "-")
            if t is None:
                return node
            node = BinOp(t.text, node, self.product())

    def product(self):
        node = self.unary()
        while True:
            t = self._accept("*", "/")
            if t is None:
                return node
            node = BinOp(t.text, node, self.unary())

    def unary(self):
        if self._accept("-"):
            return Neg(self.unary())
        if self._accept("+"):
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        t = self._accept("^")
        if t is None:
            return base
        start = self.tok.pos
        exp_node = self.exponent()
        return Pow(base, _integer_exponent(exp_node, start))

    def exponent(self):
        if self._accept("-"):
            return Neg(self.exponent())
        if self._accept("+"):
            return self.exponent()
        return self.power()

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return Num(t.value)
        if t.kind == "var":
            self.i += 1
            return Var()
        if self._accept("("):
            node = self.sum()
            if not self._accept(")"):
                self._fail("')'")
            return node
        self._fail("a number, 'z' or '('")


def _integer_exponent(node, pos):
    if node.has_var():
        raise UnsupportedOperation(f"exponent at offset {pos} depends on z")
    try:
        value = complex(node.evaluate(0j))
    except ZeroDivisionError:
        raise UnsupportedOperation(f"exponent at offset {pos} divides by zero") from None
    if value.imag != 0.0 or value.real != round(value.real):
        raise UnsupportedOperation(f"non-integer exponent {value} at offset {pos}")
    return int(round(value.real))


def parse(text):
    """Parse ``text`` into an expression tree."""
    return Parser(text).parse()


def to_text(node):
    """Fully parenthesized text that parses back to an equivalent tree."""
    return node.to_text()
