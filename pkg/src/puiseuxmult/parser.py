"""Recursive-descent parser for polynomial text.

Grammar (LL(1))::

    expr   := sign? term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' nat)?
    base   := rational | 'x' | 'y' | '(' expr ')'
    rational := nat ('/' nat)?

The optional leading sign lets rendered polynomials such as ``-x^2 + y``
parse back.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError
from .poly import BiPoly, UniPoly

__all__ = ["PolySpec", "parse_poly", "render_poly"]

_MAX_EXP = 2**63 - 1


@dataclass(frozen=True)
class PolySpec:
    source: str
    poly: BiPoly | UniPoly
    variables: tuple

    @property
    def d(self):
        return self.poly.degree

    @property
    def t(self):
        return self.poly.t


class _Parser:
    def __init__(self, text, variables):
        self.text = text
        self.pos = 0
        self.variables = variables

    def error(self, msg, pos=None):
        raise ParseError(msg, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def nat(self):
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected a natural number")
        return int(self.text[start:self.pos])

    def parse(self):
        value = self.expr()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return value

    def expr(self):
        sign = 1
        ch = self.peek()
        if ch and ch in "+-":
            sign = -1 if ch == "-" else 1
            self.pos += 1
        value = self.term()
        if sign < 0:
            value = -value
        while self.peek() and self.peek() in "+-":
            op = self.peek()
            self.pos += 1
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek() == "*":
            self.pos += 1
            value = value * self.factor()
        return value

    def factor(self):
        value = self.base()
        if self.peek() == "^":
            self.pos += 1
            if self.peek() == "-":
                self.error("negative exponent")
            at = self.pos
            e = self.nat()
            if e > _MAX_EXP:
                self.error("exponent too large", at)
            value = value**e
        return value

    def base(self):
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            value = self.expr()
            self.take(")")
            return value
        if ch.isdigit():
            num = self.nat()
            if self.peek() == "/":
                self.pos += 1
                at = self.pos
                den = self.nat()
                if den == 0:
                    self.error("zero denominator", at)
                return self.const(Fraction(num, den))
            return self.const(Fraction(num))
        if ch.isalpha():
            start = self.pos
            while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
                self.pos += 1
            name = self.text[start:self.pos]
            if name not in self.variables:
                self.error(f"unknown variable {name!r}", start)
            return self.var(name)
        if not ch:
            self.error("unexpected end of input")
        self.error(f"unexpected {ch!r}")

    def const(self, c):
        if self.variables == ("x",):
            return UniPoly.constant(c)
        return BiPoly.constant(c)

    def var(self, name):
        if self.variables == ("x",):
            return UniPoly.x()
        return BiPoly.x() if name == "x" else BiPoly.y()


def parse_poly(text: str, variables=("x", "y")) -> PolySpec:
    """Parse ``text`` into a canonical polynomial.

    ``variables`` is ``("x", "y")`` for bivariate input or ``("x",)`` for a
    univariate polynomial.
    """
    variables = tuple(variables)
    if variables not in (("x", "y"), ("x",)):
        raise ValueError("variables must be ('x', 'y') or ('x',)")
    poly = _Parser(text, variables).parse()
    return PolySpec(text, poly, variables)


def render_poly(poly) -> str:
    return poly.to_text()
