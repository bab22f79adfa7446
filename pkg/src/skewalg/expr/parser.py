"""Recursive-descent parser for the expression grammar.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | '+' unary | power
    power  := atom ('^' int)?
    int    := ['-'] DIGITS | '(' ['-'] DIGITS ')'
    atom   := NUMBER | IDENT | FUNC '(' expr ')' | '(' expr ')'

NUMBER accepts integers, decimals (``0.25``, ``1e-3``) and is read as an exact
rational.  ``a/b`` between literals is ordinary division.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .nodes import FUNCTIONS, Add, Const, Div, Expr, ExprError, Func, Mul, Pow, Sub, Sym

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^()]))"
)


class ParseError(ExprError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


class UnknownSymbolError(ExprError):
    def __init__(self, name: str, pos: int | None = None):
        where = "" if pos is None else f" at position {pos}"
        super().__init__(f"unknown symbol {name!r}{where}")
        self.name = name
        self.pos = pos


def _tokenize(text: str):
    tokens = []
    pos = 0
    norm = text.replace("−", "-")
    while pos < len(norm):
        if norm[pos:].strip() == "":
            break
        m = _TOKEN.match(norm, pos)
        if m is None or m.end() == pos:
            bad = len(norm[pos:]) - len(norm[pos:].lstrip()) + pos
            raise ParseError(f"unexpected character {norm[bad]!r}", text, bad)
        kind = m.lastgroup
        start = m.start(kind)
        value = m.group(kind)
        if value == "**":
            value = "^"
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("end", "", len(norm)))
    return tokens


class _Parser:
    def __init__(self, text: str, allowed):
        self.text = text
        self.allowed = None if allowed is None else set(allowed)
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, v, pos = self.take()
        if v != value or kind != "op":
            found = "end of input" if kind == "end" else repr(v)
            raise ParseError(f"expected {value!r}, found {found}", self.text, pos)

    def parse(self) -> Expr:
        e = self.expr()
        kind, v, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {v!r}", self.text, pos)
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            e = Add(e, rhs) if op == "+" else Sub(e, rhs)
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.unary()
            e = Mul(e, rhs) if op == "*" else Div(e, rhs)
        return e

    def unary(self) -> Expr:
        kind, v, _ = self.peek()
        if kind == "op" and v == "-":
            self.take()
            operand = self.unary()
            if isinstance(operand, Const):
                return Const(-operand.value)
            return Mul(Const(-1), operand)
        if kind == "op" and v == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            k = self.integer()
            if self.peek()[0] == "op" and self.peek()[1] == "^":
                raise ParseError("chained exponents are not allowed", self.text, self.peek()[2])
            return Pow(base, k)
        return base

    def integer(self) -> int:
        kind, v, pos = self.peek()
        paren = kind == "op" and v == "("
        if paren:
            self.take()
        sign = 1
        kind, v, pos = self.peek()
        if kind == "op" and v == "-":
            self.take()
            sign = -1
            kind, v, pos = self.peek()
        if kind != "num" or not v.isdigit():
            raise ParseError("exponent must be an integer literal", self.text, pos)
        self.take()
        if paren:
            self.expect(")")
        return sign * int(v)

    def atom(self) -> Expr:
        kind, v, pos = self.take()
        if kind == "num":
            return Const(Fraction(v))
        if kind == "ident":
            if v in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Func(v, arg)
            if self.allowed is not None and v not in self.allowed:
                raise UnknownSymbolError(v, pos)
            return Sym(v)
        if kind == "op" and v == "(":
            e = self.expr()
            self.expect(")")
            return e
        found = "end of input" if kind == "end" else repr(v)
        raise ParseError(f"unexpected {found}", self.text, pos)


def parse_expr(text: str, allowed_symbols=None) -> Expr:
    """Parse ``text``; every identifier must be in ``allowed_symbols`` (if given)."""
    if not isinstance(text, str):
        raise TypeError("expression text must be a string")
    return _Parser(text, allowed_symbols).parse()
