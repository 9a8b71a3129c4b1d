"""The crossed product S(V) #_f G.

Elements are finite sums  sum_g P_g w_g  with the multiplication
(P w_g)(Q w_h) = P . g(Q) . f(g, h) w_{gh}.
"""
from __future__ import annotations

import random
from typing import Dict, Iterator, Optional, Tuple

from .groups import Cocycle, GroupData, validate_cocycle
from .polynomials import (Monomial, Poly, Representation, format_poly, monomials_up_to,
                          substitute, validate_representation)
from .reports import Report
from .scalars import FieldSpec, Scalar


class ContextError(ValueError):
    pass


class AlgebraContext:
    """Field, dim V, group, cocycle and representation defining A."""

    def __init__(self, fld: FieldSpec, n: int, group: GroupData, cocycle: Cocycle, rep: Representation):
        if rep.n != n:
            raise ContextError("representation dimension differs from n")
        self.field = fld
        self.n = n
        self.group = group
        self.cocycle = cocycle
        self.rep = rep
        self._one_poly = Poly.constant(fld, n, 1)
        self._zero_mono = (0,) * n

    def validate(self) -> Report:
        rep = validate_cocycle(self.group, self.cocycle)
        rep.name = "context"
        rep.extend(validate_representation(self.group, self.rep))
        return rep

    # element constructors
    def zero(self) -> "CrossedElement":
        return CrossedElement(self, {})

    def one(self) -> "CrossedElement":
        return CrossedElement(self, {self.group.identity: self._one_poly})

    def w(self, g: int) -> "CrossedElement":
        return CrossedElement(self, {g: self._one_poly})

    def poly(self, P: Poly, g: Optional[int] = None) -> "CrossedElement":
        g = self.group.identity if g is None else g
        return CrossedElement(self, {g: P} if P.terms else {})

    def var(self, i: int) -> "CrossedElement":
        return self.poly(Poly.var(self.field, self.n, i))

    def scalar(self, c) -> "CrossedElement":
        return self.poly(Poly.constant(self.field, self.n, c))

    def monomial(self, m: Monomial, g: int, c=1) -> "CrossedElement":
        return self.poly(Poly.monomial(self.field, m, c), g)

    def act(self, g: int, P: Poly) -> Poly:
        """The group action gP."""
        if g == self.group.identity:
            return P
        return substitute(self.rep(g), P)

    def act_monomial(self, g: int, m: Monomial) -> Poly:
        return self.rep(g).apply_monomial(m)


class CrossedElement:
    __slots__ = ("ctx", "comps")

    def __init__(self, ctx: AlgebraContext, comps: Dict[int, Poly]):
        self.ctx = ctx
        self.comps = {g: P for g, P in comps.items() if P.terms}

    def _same(self, other: "CrossedElement") -> None:
        if not isinstance(other, CrossedElement) or other.ctx is not self.ctx:
            raise ContextError("elements belong to different algebra contexts")

    def _lift(self, other) -> "CrossedElement":
        if isinstance(other, CrossedElement):
            self._same(other)
            return other
        if isinstance(other, Poly):
            return self.ctx.poly(other)
        return self.ctx.scalar(other)

    def is_zero(self) -> bool:
        return not self.comps

    def __bool__(self):
        return bool(self.comps)

    def __eq__(self, other):
        if isinstance(other, CrossedElement):
            self._same(other)
            return self.comps == other.comps
        return self.comps == self._lift(other).comps

    def __hash__(self):
        return hash(tuple(sorted((g, hash(P)) for g, P in self.comps.items())))

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.comps)
        for g, P in other.comps.items():
            out[g] = out[g] + P if g in out else P
        return CrossedElement(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return CrossedElement(self.ctx, {g: -P for g, P in self.comps.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "CrossedElement":
        return CrossedElement(self.ctx, {g: P.scale(c) for g, P in self.comps.items()})

    def __mul__(self, other):
        if not isinstance(other, (CrossedElement, Poly)):
            return self.scale(other)
        return cp_mul(self, self._lift(other))

    def __rmul__(self, other):
        if isinstance(other, Poly):
            return cp_mul(self.ctx.poly(other), self)
        return self.scale(other)

    def __pow__(self, e: int):
        out = self.ctx.one()
        for _ in range(e):
            out = out * self
        return out

    def component(self, g: int) -> Poly:
        return self.comps.get(g, Poly.zero(self.ctx.field, self.ctx.n))

    def support(self) -> set:
        return set(self.comps)

    def var_degrees(self) -> Tuple[int, ...]:
        n = self.ctx.n
        out = [0] * n
        for P in self.comps.values():
            for i, d in enumerate(P.var_degrees()):
                out[i] = max(out[i], d)
        return tuple(out)

    def degree(self) -> int:
        return max((P.degree() for P in self.comps.values()), default=-1)

    def terms(self) -> Iterator[Tuple[int, Monomial, Scalar]]:
        """(g, monomial, coefficient) in group-index then graded-lex order."""
        for g in sorted(self.comps):
            for m, c in self.comps[g].sorted_terms():
                yield g, m, c

    def __repr__(self):
        return f"CrossedElement({format_element(self)})"


def cp_mul(a: CrossedElement, b: CrossedElement) -> CrossedElement:
    a._same(b)
    ctx = a.ctx
    G = ctx.group
    f = ctx.cocycle
    out: Dict[int, Dict[Monomial, Scalar]] = {}
    for g, P in a.comps.items():
        for h, Q in b.comps.items():
            gQ = ctx.act(g, Q)
            c = f(g, h)
            acc = out.setdefault(G.m(g, h), {})
            for m1, c1 in P.terms.items():
                cc = c1 * c
                for m2, c2 in gQ.terms.items():
                    m = tuple(x + y for x, y in zip(m1, m2))
                    v = acc.get(m)
                    acc[m] = cc * c2 if v is None else v + cc * c2
    return CrossedElement(ctx, {g: Poly(ctx.field, ctx.n, t) for g, t in out.items()})


def cp_commutator(a: CrossedElement, b: CrossedElement) -> CrossedElement:
    return cp_mul(a, b) - cp_mul(b, a)


def component(a: CrossedElement, g: int) -> Poly:
    return a.component(g)


def support(a: CrossedElement) -> set:
    return a.support()


def var_degrees(a: CrossedElement) -> Tuple[int, ...]:
    return a.var_degrees()


def format_element(a: CrossedElement) -> str:
    """Text form in the element grammar, e.g. ``(x1^2 + 2*x2)*w[t*s] + x1*w[e]``."""
    if not a.comps:
        return "0"
    G = a.ctx.group
    parts = []
    for g in sorted(a.comps):
        P = a.comps[g]
        lab = G.label(g)
        txt = format_poly(P)
        if len(P.terms) == 1:
            neg = txt.startswith("-")
            body = txt[1:] if neg else txt
            if body == "1":
                body = f"w[{lab}]"
            else:
                body = f"{body}*w[{lab}]"
            parts.append(("-" if neg else "+", body))
        else:
            parts.append(("+", f"({txt})*w[{lab}]"))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def random_element(ctx: AlgebraContext, rng: random.Random, max_degree: int = 3, max_support: int = 2,
                   max_terms: int = 3, coeff_range: int = 3) -> CrossedElement:
    G = ctx.group
    k = rng.randint(1, max_support)
    gs = rng.sample(list(G.elements), min(k, G.size))
    monos = monomials_up_to(ctx.n, max_degree)
    comps = {}
    for g in gs:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            c = rng.randint(-coeff_range, coeff_range)
            if c:
                terms[rng.choice(monos)] = ctx.field(c)
        comps[g] = Poly(ctx.field, ctx.n, terms)
    return CrossedElement(ctx, comps)
