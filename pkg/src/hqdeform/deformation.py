"""The deformed product  a * b = sum_i t^i (1/(i)!_q) delta1^i(alpha^-i(a)) delta2^i(b).

Every product is an exact polynomial in t: delta2 lowers the x2-degree, and
at a root of unity of order l only i < l contributes.
"""
from __future__ import annotations

import random
from typing import List, Optional, Sequence

from .crossed_product import CrossedElement, cp_mul, format_element, random_element
from .hq_structure import ALPHA_INV, HqStructure
from .reports import Report
from .scalars import qfactorial


class DeformationError(ValueError):
    pass


class TSeries:
    """Exact polynomial in t with coefficients in A."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx, coeffs: Sequence[CrossedElement]):
        self.ctx = ctx
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = cs

    @classmethod
    def const(cls, a: CrossedElement) -> "TSeries":
        return cls(a.ctx, [a])

    def __len__(self):
        return len(self.coeffs)

    def coefficient(self, i: int) -> CrossedElement:
        return self.coeffs[i] if i < len(self.coeffs) else self.ctx.zero()

    def __add__(self, other: "TSeries") -> "TSeries":
        m = max(len(self), len(other))
        return TSeries(self.ctx, [self.coefficient(i) + other.coefficient(i) for i in range(m)])

    def __eq__(self, other):
        return isinstance(other, TSeries) and self.coeffs == other.coeffs

    def first_difference(self, other: "TSeries") -> Optional[int]:
        for i in range(max(len(self), len(other))):
            if self.coefficient(i) != other.coefficient(i):
                return i
        return None

    def to_list(self) -> List[str]:
        return [format_element(c) for c in self.coeffs]

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            body = format_element(c)
            parts.append(body if i == 0 else f"t^{i}*({body})" if i > 1 else f"t*({body})")
        return " + ".join(parts)

    __repr__ = __str__


def _deformed_terms(st: HqStructure, a: CrossedElement, b: CrossedElement) -> List[CrossedElement]:
    l = st.l
    out = [cp_mul(a, b)]
    twisted = a
    right = b
    i = 0
    while True:
        i += 1
        if l is not None and i >= l:
            break
        right = st.delta_apply(2, right)
        if right.is_zero():
            break
        twisted = st.apply_automorphism(ALPHA_INV, twisted)
        left = st.delta_power(1, i, twisted)
        if left.is_zero():
            continue
        fac = qfactorial(i, st.q)
        if fac == 0:
            raise DeformationError(f"({i})!_q vanishes; the deformation needs its inverse")
        out.append(cp_mul(left, right).scale(1 / fac))
    return out


def deformed_product(st: HqStructure, a: CrossedElement, b: CrossedElement) -> TSeries:
    return TSeries(st.ctx, _deformed_terms(st, a, b))


def star(st: HqStructure, A: TSeries, B: TSeries) -> TSeries:
    """Bilinear extension of * to t-polynomials."""
    ctx = st.ctx
    acc: List[CrossedElement] = []
    for i, a in enumerate(A.coeffs):
        if a.is_zero():
            continue
        for j, b in enumerate(B.coeffs):
            if b.is_zero():
                continue
            for k, c in enumerate(_deformed_terms(st, a, b)):
                while len(acc) <= i + j + k:
                    acc.append(ctx.zero())
                acc[i + j + k] = acc[i + j + k] + c
    return TSeries(ctx, acc)


def infinitesimal(st: HqStructure, a: CrossedElement, b: CrossedElement) -> CrossedElement:
    return st.delta_apply(1, st.apply_automorphism(ALPHA_INV, a)) * st.delta_apply(2, b)


def check_associativity(st: HqStructure, a, b, c) -> Report:
    rep = Report("associativity")
    A, B, C = (TSeries.const(x) for x in (a, b, c))
    lhs = star(st, star(st, A, B), C)
    rhs = star(st, A, star(st, B, C))
    k = lhs.first_difference(rhs)
    wit = None
    if k is not None:
        wit = {"t_degree": k, "a": format_element(a), "b": format_element(b), "c": format_element(c),
               "lhs": format_element(lhs.coefficient(k)), "rhs": format_element(rhs.coefficient(k))}
    rep.add("deform.assoc", k is None, wit)
    return rep


def check_unit(st: HqStructure, a: CrossedElement) -> Report:
    rep = Report("unit")
    one = st.ctx.one()
    A = TSeries.const(a)
    left = deformed_product(st, one, a)
    right = deformed_product(st, a, one)
    wit = None
    if left != A:
        wit = {"side": "left", "a": format_element(a), "got": left.to_list()}
    elif right != A:
        wit = {"side": "right", "a": format_element(a), "got": right.to_list()}
    rep.add("deform.unit", wit is None, wit)
    return rep


def bar_coboundary(st: HqStructure, a, b, c, phi=None) -> CrossedElement:
    """a phi(b,c) - phi(ab,c) + phi(a,bc) - phi(a,b) c."""
    phi = phi or (lambda x, y: infinitesimal(st, x, y))
    return a * phi(b, c) - phi(a * b, c) + phi(a, b * c) - phi(a, b) * c


def deformation_suite(st: HqStructure, samples: int = 100, seed: int = 42, max_degree: int = 3,
                      max_support: int = 2) -> Report:
    """Seeded random checks: associativity, unit, t^0 and t^1 coefficients, bar cocycle, series length."""
    rng = random.Random(seed)
    ctx = st.ctx
    rep = Report("deformation")
    firsts = {}
    l = st.l
    for k in range(samples):
        a, b, c = (random_element(ctx, rng, max_degree=max_degree, max_support=max_support) for _ in range(3))
        ab = deformed_product(st, a, b)
        tests = {
            "deform.assoc": lambda: check_associativity(st, a, b, c).checks[0],
            "deform.unit": lambda: check_unit(st, a).checks[0],
        }
        for cid, fn in tests.items():
            if cid in firsts:
                continue
            chk = fn()
            if not chk.ok:
                firsts[cid] = chk.witness
        if "deform.t0" not in firsts and ab.coefficient(0) != cp_mul(a, b):
            firsts["deform.t0"] = {"sample": k}
        if "deform.t1" not in firsts and ab.coefficient(1) != infinitesimal(st, a, b):
            firsts["deform.t1"] = {"sample": k, "a": format_element(a), "b": format_element(b)}
        if "deform.length" not in firsts and l is not None and len(ab) > l:
            firsts["deform.length"] = {"sample": k, "length": len(ab)}
        if "deform.bar_cocycle" not in firsts:
            r = bar_coboundary(st, a, b, c)
            if not r.is_zero():
                firsts["deform.bar_cocycle"] = {"sample": k, "value": format_element(r)}
    for cid in ("deform.assoc", "deform.unit", "deform.t0", "deform.t1", "deform.bar_cocycle", "deform.length"):
        rep.add(cid, cid not in firsts, firsts.get(cid),
                detail=f"{samples} samples, seed {seed}, degree <= {max_degree}")
    return rep
