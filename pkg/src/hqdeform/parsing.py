"""Recursive-descent parser for polynomials and crossed-product elements.

Grammar (whitespace ignored)::

    expr   := [+|-] term ((+|-) term)*
    term   := factor (* factor)*
    factor := atom [^ INT]
    atom   := INT [/ INT] | x<i> | w[WORD] | ( expr )

``WORD`` is a product of generator labels such as ``t*t*s`` or ``t^2*s``;
``e`` is the identity.  Products are taken in the crossed product, so
``w[s]*x1`` means w_s x1 = (s x1) w_s.
"""
from __future__ import annotations

import re
from typing import List, Optional, Tuple

from .crossed_product import AlgebraContext, CrossedElement
from .polynomials import Poly
from .scalars import FieldSpec


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int, text: str):
        super().__init__(f"{msg} at position {pos} in {text!r}")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>x\d+)|(?P<w>w\[[^\]]*\])|(?P<op>[-+*/^()]))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    toks = []
    pos = 0
    text = text.replace("−", "-")
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("unexpected character", pos, text)
        kind = m.lastgroup
        toks.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, fld: FieldSpec, n: int, ctx: Optional[AlgebraContext]):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.field = fld
        self.n = n
        self.ctx = ctx

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, val):
        t = self.take()
        if t[1] != val:
            raise ParseError(f"expected {val!r}", t[2], self.text)

    def lift_scalar(self, c):
        if self.ctx is None:
            return Poly.constant(self.field, self.n, c)
        return self.ctx.scalar(c)

    def parse(self):
        v = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError("unexpected token", t[2], self.text)
        return v

    def expr(self):
        sign = 1
        t = self.peek()
        if t[1] in "+-" and t[0] == "op":
            self.take()
            sign = -1 if t[1] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "+-":
                self.take()
                rhs = self.term()
                acc = acc + rhs if t[1] == "+" else acc - rhs
            else:
                return acc

    def term(self):
        acc = self.factor()
        while self.peek()[1] == "*" and self.peek()[0] == "op":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            t = self.take()
            if t[0] != "num":
                raise ParseError("exponent must be a nonnegative integer", t[2], self.text)
            base = base ** int(t[1])
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            num = int(val)
            den = 1
            if self.peek()[1] == "/":
                self.take()
                t = self.take()
                if t[0] != "num":
                    raise ParseError("denominator must be an integer", t[2], self.text)
                den = int(t[1])
            try:
                c = self.field(num) / self.field(den)
            except ZeroDivisionError:
                raise ParseError("zero denominator", pos, self.text) from None
            return self.lift_scalar(c)
        if kind == "var":
            i = int(val[1:]) - 1
            if not 0 <= i < self.n:
                raise ParseError(f"variable {val} outside x1..x{self.n}", pos, self.text)
            P = Poly.var(self.field, self.n, i)
            return P if self.ctx is None else self.ctx.poly(P)
        if kind == "w":
            if self.ctx is None:
                raise ParseError("group symbols are not allowed in a polynomial", pos, self.text)
            word = val[2:-1]
            try:
                g = self.ctx.group.parse_word(word)
            except ValueError as exc:
                raise ParseError(str(exc), pos, self.text) from None
            return self.ctx.w(g)
        if val == "(":
            v = self.expr()
            self.expect(")")
            return v
        raise ParseError("unexpected token", pos, self.text)


def parse_poly(text: str, fld: FieldSpec, n: int) -> Poly:
    return _Parser(str(text), fld, n, None).parse()


def parse_element(text: str, ctx: AlgebraContext) -> CrossedElement:
    return _Parser(str(text), ctx.field, ctx.n, ctx).parse()
