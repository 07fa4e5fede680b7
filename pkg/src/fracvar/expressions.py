"""Tiny expression vocabulary for custom problem data.

Custom problems supply g, h and their derivatives as text in a deliberately
small language: numbers, the variable x, + - * / ^, parentheses and the
functions exp, sin, cos.  That is enough to write every built-in family
(e.g. ``1/(1+x^5)`` and ``-5*x^4/(1+x^5)^2``) without opening the door to
general-purpose expression evaluation.

``parse_function(text)`` compiles the text once into a plain float -> float
callable.
"""

from __future__ import annotations

import math
from typing import Callable

__all__ = ["ExpressionError", "parse_function"]

_FUNCTIONS = {"exp": math.exp, "sin": math.sin, "cos": math.cos}


class ExpressionError(ValueError):
    """Malformed expression text."""


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens: list[tuple[str, str]] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "+-*/^()":
            tokens.append((ch, ch))
            i += 1
        elif ch.isdigit() or ch == ".":
            j = i
            while j < len(text) and (text[j].isdigit() or text[j] == "."):
                j += 1
            # exponent notation like 1e-3
            if j < len(text) and text[j] in "eE":
                k = j + 1
                if k < len(text) and text[k] in "+-":
                    k += 1
                if k < len(text) and text[k].isdigit():
                    while k < len(text) and text[k].isdigit():
                        k += 1
                    j = k
            try:
                float(text[i:j])
            except ValueError:
                raise ExpressionError(f"bad number {text[i:j]!r} at position {i}") from None
            tokens.append(("num", text[i:j]))
            i = j
        elif ch.isalpha():
            j = i
            while j < len(text) and text[j].isalpha():
                j += 1
            name = text[i:j]
            if name != "x" and name not in _FUNCTIONS:
                raise ExpressionError(f"unknown name {name!r} at position {i}")
            tokens.append(("name", name))
            i = j
        else:
            raise ExpressionError(f"unexpected character {ch!r} at position {i}")
    return tokens


class _Parser:
    """Recursive descent over: expr -> term -> unary -> power -> atom."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def take(self) -> tuple[str, str]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> None:
        if self.peek() != kind:
            raise ExpressionError(f"expected {kind!r} in {self.text!r}")
        self.take()

    def parse(self) -> Callable[[float], float]:
        fn = self.expr()
        if self.pos != len(self.tokens):
            raise ExpressionError(f"trailing input in {self.text!r}")
        return fn

    def expr(self) -> Callable[[float], float]:
        fn = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            right = self.term()
            left = fn
            if op == "+":
                fn = lambda x, l=left, r=right: l(x) + r(x)
            else:
                fn = lambda x, l=left, r=right: l(x) - r(x)
        return fn

    def term(self) -> Callable[[float], float]:
        fn = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()[0]
            right = self.unary()
            left = fn
            if op == "*":
                fn = lambda x, l=left, r=right: l(x) * r(x)
            else:
                fn = lambda x, l=left, r=right: l(x) / r(x)
        return fn

    def unary(self) -> Callable[[float], float]:
        if self.peek() == "-":
            self.take()
            inner = self.unary()
            return lambda x, f=inner: -f(x)
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Callable[[float], float]:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            exponent = self.unary()
            return lambda x, b=base, e=exponent: b(x) ** e(x)
        return base

    def atom(self) -> Callable[[float], float]:
        kind = self.peek()
        if kind is None:
            raise ExpressionError(f"unexpected end of expression in {self.text!r}")
        if kind == "num":
            value = float(self.take()[1])
            return lambda x, v=value: v
        if kind == "name":
            name = self.take()[1]
            if name == "x":
                return lambda x: x
            func = _FUNCTIONS[name]
            self.expect("(")
            inner = self.expr()
            self.expect(")")
            return lambda x, f=func, g=inner: f(g(x))
        if kind == "(":
            self.take()
            inner = self.expr()
            self.expect(")")
            return inner
        raise ExpressionError(f"unexpected token {kind!r} in {self.text!r}")


def parse_function(text: str) -> Callable[[float], float]:
    """Compile expression text into a float -> float callable."""
    if not text or not text.strip():
        raise ExpressionError("empty expression")
    return _Parser(text).parse()
