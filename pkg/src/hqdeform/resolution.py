"""A small bimodule resolution of A = S(V) #_f G and its comparison with the
normalized bar resolution.

Three layers:

* ``Y``: the Koszul-type DG algebra with degree-0 generators y_i, rho_i and
  degree-1 generators vbar_i, stored in the left S-basis y^a rho^m vbar_E.
* ``X_rs = (A (x) kG-bar^s) (x)_S Y_r (x)_S A``: stored in normal form
  a (x) [g_1..g_s] (x) vbar_E (x) b, with y moved left and z moved right.
* ``Bar``: A (x) Abar^n (x) A with middle slots in the monomial basis.

The differentials d0, d1, the homotopy sigma0, the recursive definitions and
the comparison map theta are all available, together with checks of the
identities tying them together.
"""
from __future__ import annotations

import itertools
import math
import random
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .crossed_product import AlgebraContext, CrossedElement, cp_mul, random_element
from .polynomials import Monomial, Poly, monomials_up_to
from .reports import Report
from .scalars import Scalar

GWord = Tuple[int, ...]
Ext = Tuple[int, ...]
AKey = Tuple[Monomial, int]


class ResolutionError(ValueError):
    pass


# ---------------------------------------------------------------- Y layer

YKey = Tuple[Monomial, Monomial, Ext]


class YElement:
    """Sum of c * y^a rho^m vbar_E with E strictly increasing."""

    __slots__ = ("fld", "n", "terms")

    def __init__(self, fld, n: int, terms: Optional[Dict[YKey, Scalar]] = None):
        self.fld = fld
        self.n = n
        self.terms = {k: c for k, c in (terms or {}).items() if c != 0}

    @classmethod
    def basis(cls, fld, n: int, rho: Sequence[int] = None, ext: Sequence[int] = (), y: Sequence[int] = None,
              c=1) -> "YElement":
        z = (0,) * n
        key = (tuple(y) if y else z, tuple(rho) if rho else z, tuple(ext))
        if list(key[2]) != sorted(set(key[2])):
            raise ResolutionError("exterior indices must be strictly increasing")
        return cls(fld, n, {key: fld(c)})

    def __add__(self, other: "YElement") -> "YElement":
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t[k] + c if k in t else c
        return YElement(self.fld, self.n, t)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "YElement":
        return YElement(self.fld, self.n, {k: v * c for k, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, YElement) and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> Optional[int]:
        ds = {len(k[2]) for k in self.terms}
        return ds.pop() if len(ds) == 1 else None


def y_boundary(x: YElement) -> YElement:
    """The derivation with vbar_i -> rho_i."""
    out: Dict[YKey, Scalar] = {}
    for (ym, rho, E), c in x.terms.items():
        for k, i in enumerate(E):
            r2 = list(rho)
            r2[i] += 1
            key = (ym, tuple(r2), E[:k] + E[k + 1:])
            v = c if k % 2 == 0 else -c
            out[key] = out[key] + v if key in out else v
    return YElement(x.fld, x.n, out)


def _y_homotopy_key(rho: Monomial, E: Ext) -> Optional[Tuple[int, Monomial, Ext]]:
    last = -1
    for i in range(len(rho) - 1, -1, -1):
        if rho[i] > 0 or i in E:
            last = i
            break
    if last < 0 or last in E:
        return None
    r2 = list(rho)
    r2[last] -= 1
    sign = -1 if len(E) % 2 else 1
    return sign, tuple(r2), E + (last,)


def y_homotopy(x: YElement) -> YElement:
    """Contracting homotopy: acts on the trailing rho/vbar block, left S-linear."""
    out: Dict[YKey, Scalar] = {}
    for (ym, rho, E), c in x.terms.items():
        h = _y_homotopy_key(rho, E)
        if h is None:
            continue
        sign, r2, E2 = h
        key = (ym, r2, E2)
        v = c * sign
        out[key] = out[key] + v if key in out else v
    return YElement(x.fld, x.n, out)


def y_mu(x: YElement) -> Poly:
    """Augmentation Y_0 -> S: y, z -> v, so rho -> 0."""
    acc = {}
    for (ym, rho, E), c in x.terms.items():
        if E:
            raise ResolutionError("augmentation is defined on degree 0 only")
        if any(rho):
            continue
        acc[ym] = acc.get(ym, 0) + c
    return Poly(x.fld, x.n, acc)


def y_sigma0(P: Poly) -> YElement:
    z = (0,) * P.n
    return YElement(P.field, P.n, {(m, z, ()): c for m, c in P.terms.items()})


def y_basis(n: int, max_weight: int, min_weight: int = 1) -> List[Tuple[Monomial, Ext]]:
    out = []
    for E_size in range(0, min(n, max_weight) + 1):
        for E in itertools.combinations(range(n), E_size):
            for m in monomials_up_to(n, max_weight - E_size):
                if sum(m) + E_size >= min_weight:
                    out.append((m, E))
    return out


# ---------------------------------------------------------------- helpers

def _akeys(a: CrossedElement) -> Iterable[Tuple[AKey, Scalar]]:
    for g, P in a.comps.items():
        for m, c in P.terms.items():
            yield (m, g), c


def _abasis(ctx: AlgebraContext, k: AKey) -> CrossedElement:
    return ctx.monomial(k[0], k[1])


def _unit_key(ctx: AlgebraContext) -> AKey:
    return ((0,) * ctx.n, ctx.group.identity)


def _acc(d: dict, k, v) -> None:
    if k in d:
        s = d[k] + v
        if s == 0:
            del d[k]
        else:
            d[k] = s
    elif v != 0:
        d[k] = v


def _wedge_images(ctx: AlgebraContext, g: int, E: Ext) -> Dict[Ext, Scalar]:
    """vbar(g v_{e1}) ... vbar(g v_{er}) as a combination of sorted exterior monomials."""
    M = ctx.rep(g).matrix
    cur: Dict[Ext, Scalar] = {(): ctx.field.one}
    for e in E:
        nxt: Dict[Ext, Scalar] = {}
        for F, c in cur.items():
            for j in range(ctx.n):
                coef = M[j][e]
                if coef == 0 or j in F:
                    continue
                pos = sum(1 for x in F if x < j)
                sign = -1 if (len(F) - pos) % 2 else 1
                F2 = F[:pos] + (j,) + F[pos:]
                _acc(nxt, F2, c * coef * sign)
        cur = nxt
    return cur


def _ext_sign_insert(E: Ext, i: int) -> Tuple[int, Ext]:
    pos = sum(1 for x in E if x < i)
    return pos, E[:pos] + (i,) + E[pos:]


# ---------------------------------------------------------------- X layer

XKey = Tuple[Monomial, int, GWord, Ext, Monomial, int]


class XElement:
    """Element of the total complex, in normal form."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: AlgebraContext, terms: Optional[Dict[XKey, Scalar]] = None):
        self.ctx = ctx
        self.terms = {k: c for k, c in (terms or {}).items() if c != 0}

    @classmethod
    def basis(cls, ctx: AlgebraContext, gword: Sequence[int] = (), ext: Sequence[int] = ()) -> "XElement":
        z = (0,) * ctx.n
        e = ctx.group.identity
        if any(g == e for g in gword):
            return cls(ctx)
        if list(ext) != sorted(set(ext)):
            raise ResolutionError("exterior indices must be strictly increasing")
        return cls(ctx, {(z, e, tuple(gword), tuple(ext), z, e): ctx.field.one})

    @classmethod
    def make(cls, a: CrossedElement, gword: Sequence[int], ext: Sequence[int], b: CrossedElement) -> "XElement":
        ctx = a.ctx
        out: Dict[XKey, Scalar] = {}
        if any(g == ctx.group.identity for g in gword):
            return cls(ctx)
        for (am, ag), ca in _akeys(a):
            for (bm, bg), cb in _akeys(b):
                _acc(out, (am, ag, tuple(gword), tuple(ext), bm, bg), ca * cb)
        return cls(ctx, out)

    def __add__(self, other: "XElement") -> "XElement":
        t = dict(self.terms)
        for k, c in other.terms.items():
            _acc(t, k, c)
        return XElement(self.ctx, t)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "XElement":
        return XElement(self.ctx, {k: v * c for k, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, XElement) and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def bidegrees(self) -> set:
        return {(len(k[3]), len(k[2])) for k in self.terms}

    def __repr__(self):
        return f"XElement({len(self.terms)} terms, bidegrees={sorted(self.bidegrees())})"


def _gprod(ctx: AlgebraContext, gword: GWord) -> int:
    return ctx.group.product(*gword) if gword else ctx.group.identity


def _x_add(out: Dict[XKey, Scalar], a: CrossedElement, gword: GWord, E: Ext, b: CrossedElement, c) -> None:
    if c == 0 or a.is_zero() or b.is_zero():
        return
    for (am, ag), ca in _akeys(a):
        for (bm, bg), cb in _akeys(b):
            _acc(out, (am, ag, gword, E, bm, bg), c * ca * cb)


def _right_s(ctx: AlgebraContext, a: CrossedElement, gword: GWord, P: Poly) -> CrossedElement:
    """(a (x) g) . P  =  a * (g_1...g_s P)."""
    return cp_mul(a, ctx.poly(ctx.act(_gprod(ctx, gword), P)))


def _rho_expand(ctx: AlgebraContext, rho: Monomial):
    """rho^m = prod (z_i - y_i)^m_i  ->  [(coeff, y-exponents, z-exponents)]."""
    ranges = [range(e + 1) for e in rho]
    out = []
    for alpha in itertools.product(*ranges):
        c = 1
        for e, a in zip(rho, alpha):
            c *= math.comb(e, a) * (-1) ** a
        out.append((c, tuple(alpha), tuple(e - a for e, a in zip(rho, alpha))))
    return out


def x_from_y(ctx: AlgebraContext, a: CrossedElement, gword: GWord, ym: Monomial, rho: Monomial, E: Ext,
             b: CrossedElement, c, out: Dict[XKey, Scalar]) -> None:
    """Add c * (a (x) g) (x)_S (y^ym rho^rho vbar_E) (x)_S b in normal form."""
    fld = ctx.field
    for cc, ya, za in _rho_expand(ctx, rho):
        left_poly = Poly.monomial(fld, tuple(p + q for p, q in zip(ym, ya)))
        a2 = _right_s(ctx, a, gword, left_poly)
        b2 = cp_mul(ctx.monomial(za, ctx.group.identity), b)
        _x_add(out, a2, gword, E, b2, c * cc)


def x_lmul(a: CrossedElement, x: XElement) -> XElement:
    ctx = x.ctx
    out: Dict[XKey, Scalar] = {}
    for (am, ag, gw, E, bm, bg), c in x.terms.items():
        prod = cp_mul(a, ctx.monomial(am, ag))
        for (m, g), cc in _akeys(prod):
            _acc(out, (m, g, gw, E, bm, bg), c * cc)
    return XElement(ctx, out)


def x_rmul(x: XElement, b: CrossedElement) -> XElement:
    ctx = x.ctx
    out: Dict[XKey, Scalar] = {}
    for (am, ag, gw, E, bm, bg), c in x.terms.items():
        prod = cp_mul(ctx.monomial(bm, bg), b)
        for (m, g), cc in _akeys(prod):
            _acc(out, (am, ag, gw, E, m, g), c * cc)
    return XElement(ctx, out)


def extend_bimodule(fn: Callable[[GWord, Ext], XElement], x: XElement) -> XElement:
    """Apply the A-bimodule map determined by its values on basis elements."""
    ctx = x.ctx
    out = XElement(ctx)
    for (am, ag, gw, E, bm, bg), c in x.terms.items():
        v = fn(gw, E)
        if v.is_zero():
            continue
        v = x_rmul(x_lmul(ctx.monomial(am, ag), v), ctx.monomial(bm, bg))
        out = out + v.scale(c)
    return out


def x_diff_d0(x: XElement) -> XElement:
    """(-1)^s (id (x) boundary (x) id), with rho = z - y acting as right-minus-left."""
    ctx = x.ctx
    out: Dict[XKey, Scalar] = {}
    for (am, ag, gw, E, bm, bg), c in x.terms.items():
        s = len(gw)
        a = ctx.monomial(am, ag)
        b = ctx.monomial(bm, bg)
        for k, i in enumerate(E):
            sign = (-1) ** s * (-1) ** k
            rest = E[:k] + E[k + 1:]
            rho = tuple(1 if j == i else 0 for j in range(ctx.n))
            x_from_y(ctx, a, gw, (0,) * ctx.n, rho, rest, b, c * sign, out)
    return XElement(ctx, out)


def _d1_basis_terms(ctx: AlgebraContext, gw: GWord, E: Ext) -> List[Tuple[CrossedElement, GWord, Dict[Ext, Scalar], CrossedElement]]:
    """The closed formula for d1(1 (x) g (x) vbar_E (x) 1) as (left, word, exterior combo, right) terms."""
    G, f, fld = ctx.group, ctx.cocycle, ctx.field
    s = len(gw)
    if s == 0:
        return []
    one = ctx.one()
    terms = [(ctx.w(gw[0]), gw[1:], {E: fld.one}, one)]
    for i in range(s - 1):
        gg = G.m(gw[i], gw[i + 1])
        if gg == G.identity:
            continue
        sign = -1 if (i + 1) % 2 else 1
        terms.append((one.scale(f(gw[i], gw[i + 1]) * sign), gw[:i] + (gg,) + gw[i + 2:], {E: fld.one}, one))
    sign = -1 if s % 2 else 1
    terms.append((one.scale(sign), gw[:-1], _wedge_images(ctx, gw[-1], E), ctx.w(gw[-1])))
    return terms


def x_diff_d1(x: XElement) -> XElement:
    ctx = x.ctx
    out: Dict[XKey, Scalar] = {}
    for (am, ag, gw, E, bm, bg), c in x.terms.items():
        a = ctx.monomial(am, ag)
        b = ctx.monomial(bm, bg)
        for left, word, ext, right in _d1_basis_terms(ctx, gw, E):
            la = cp_mul(a, left)
            rb = cp_mul(right, b)
            for F, cf in ext.items():
                _x_add(out, la, word, F, rb, c * cf)
    return XElement(ctx, out)


def x_diff(x: XElement) -> XElement:
    return x_diff_d0(x) + x_diff_d1(x)


# Z layer: Z_s = (A (x) kG-bar^s) (x)_S A  ~  A (x) kG-bar^s (x) kG

ZKey = Tuple[Monomial, int, GWord, int]


class ZElement:
    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: AlgebraContext, terms: Optional[Dict[ZKey, Scalar]] = None):
        self.ctx = ctx
        self.terms = {k: c for k, c in (terms or {}).items() if c != 0}

    @classmethod
    def basis(cls, ctx: AlgebraContext, gword: Sequence[int]) -> "ZElement":
        z = (0,) * ctx.n
        e = ctx.group.identity
        return cls(ctx, {(z, e, tuple(gword), e): ctx.field.one})

    def __eq__(self, other):
        return isinstance(other, ZElement) and self.terms == other.terms

    def is_zero(self):
        return not self.terms


def _z_add(out: Dict[ZKey, Scalar], a: CrossedElement, gw: GWord, h: int, c) -> None:
    for (am, ag), ca in _akeys(a):
        _acc(out, (am, ag, gw, h), c * ca)


def mu(x: XElement) -> ZElement:
    """X_{0s} -> Z_s."""
    ctx = x.ctx
    out: Dict[ZKey, Scalar] = {}
    for (am, ag, gw, E, bm, bg), c in x.terms.items():
        if E:
            raise ResolutionError("mu is defined on X_{0s} only")
        a = _right_s(ctx, ctx.monomial(am, ag), gw, Poly.monomial(ctx.field, bm))
        _z_add(out, a, gw, bg, c)
    return ZElement(ctx, out)


def z_delta(z: ZElement) -> ZElement:
    """Z_s -> Z_{s-1}."""
    ctx = z.ctx
    G, f = ctx.group, ctx.cocycle
    out: Dict[ZKey, Scalar] = {}
    for (am, ag, gw, h), c in z.terms.items():
        s = len(gw)
        if s == 0:
            continue
        a = ctx.monomial(am, ag)
        _z_add(out, cp_mul(a, ctx.w(gw[0])), gw[1:], h, c)
        for i in range(s - 1):
            gg = G.m(gw[i], gw[i + 1])
            if gg == G.identity:
                continue
            sign = -1 if (i + 1) % 2 else 1
            _z_add(out, a, gw[:i] + (gg,) + gw[i + 2:], h, c * sign * f(gw[i], gw[i + 1]))
        sign = -1 if s % 2 else 1
        _z_add(out, a, gw[:-1], G.m(gw[-1], h), c * sign * f(gw[-1], h))
    return ZElement(ctx, out)


def sigma0_homotopy(x) -> XElement:
    """The left-A-linear homotopy on Z_s or on X_{rs} (rows of the double complex)."""
    if isinstance(x, ZElement):
        ctx = x.ctx
        z = (0,) * ctx.n
        return XElement(ctx, {(am, ag, gw, (), z, h): c for (am, ag, gw, h), c in x.terms.items()})
    ctx = x.ctx
    fld = ctx.field
    out: Dict[XKey, Scalar] = {}
    zero = (0,) * ctx.n
    for (am, ag, gw, E, bm, bg), c in x.terms.items():
        s = len(gw)
        a = ctx.monomial(am, ag)
        wb = ctx.w(bg)
        # z^bm = (y + rho)^bm: y-part moves left, rho-part stays in Y
        for gamma in itertools.product(*[range(e + 1) for e in bm]):
            binom = 1
            for e, g_ in zip(bm, gamma):
                binom *= math.comb(e, g_)
            h = _y_homotopy_key(tuple(gamma), E)
            if h is None:
                continue
            sign, r2, E2 = h
            ypart = tuple(e - g_ for e, g_ in zip(bm, gamma))
            a2 = _right_s(ctx, a, gw, Poly.monomial(fld, ypart))
            x_from_y(ctx, a2, gw, zero, r2, E2, wb, c * binom * sign * (-1) ** s, out)
    return XElement(ctx, out)


class RecursiveDifferentials:
    """The literal recursive definitions of d^1 and d^2, memoized on basis elements."""

    def __init__(self, ctx: AlgebraContext):
        self.ctx = ctx
        self._d1: Dict[Tuple[GWord, Ext], XElement] = {}
        self._d2: Dict[Tuple[GWord, Ext], XElement] = {}

    def d1_basis(self, gw: GWord, E: Ext) -> XElement:
        key = (gw, E)
        if key in self._d1:
            return self._d1[key]
        ctx = self.ctx
        x = XElement.basis(ctx, gw, E)
        if not gw or x.is_zero():
            v = XElement(ctx)
        elif not E:
            v = sigma0_homotopy(z_delta(mu(x)))
        else:
            v = -sigma0_homotopy(self.d1(x_diff_d0(x)))
        self._d1[key] = v
        return v

    def d1(self, x: XElement) -> XElement:
        return extend_bimodule(self.d1_basis, x)

    def d2_basis(self, gw: GWord, E: Ext) -> XElement:
        key = (gw, E)
        if key in self._d2:
            return self._d2[key]
        ctx = self.ctx
        x = XElement.basis(ctx, gw, E)
        if len(gw) < 2 or x.is_zero():
            v = XElement(ctx)
        elif not E:
            v = -sigma0_homotopy(self.d1(self.d1(x)))
        else:
            v = -sigma0_homotopy(self.d2(x_diff_d0(x)) + self.d1(self.d1(x)))
        self._d2[key] = v
        return v

    def d2(self, x: XElement) -> XElement:
        return extend_bimodule(self.d2_basis, x)


def d1_recursive_oracle(ctx: AlgebraContext, gword: Sequence[int], ext: Sequence[int],
                        cache: Optional[RecursiveDifferentials] = None) -> XElement:
    rd = cache or RecursiveDifferentials(ctx)
    return rd.d1_basis(tuple(gword), tuple(ext))


def x_basis(ctx: AlgebraContext, r: int, s: int) -> List[Tuple[GWord, Ext]]:
    G = ctx.group
    ne = G.non_identity
    out = []
    for gw in itertools.product(ne, repeat=s):
        for E in itertools.combinations(range(ctx.n), r):
            out.append((tuple(gw), tuple(E)))
    return out


# ---------------------------------------------------------------- bar layer

BarKey = Tuple[AKey, Tuple[AKey, ...], AKey]


class BarElement:
    """Sum of a0 (x) abar_1 (x) ... (x) abar_n (x) a_{n+1} in the monomial basis."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: AlgebraContext, terms: Optional[Dict[BarKey, Scalar]] = None):
        self.ctx = ctx
        unit = _unit_key(ctx)
        self.terms = {k: c for k, c in (terms or {}).items() if c != 0 and unit not in k[1]}

    @classmethod
    def make(cls, a0: CrossedElement, middle: Sequence[CrossedElement], last: CrossedElement, c=1) -> "BarElement":
        ctx = a0.ctx
        out: Dict[BarKey, Scalar] = {}
        _bar_add(out, a0, tuple(middle), last, ctx.field(c))
        return cls(ctx, out)

    def __add__(self, other: "BarElement") -> "BarElement":
        t = dict(self.terms)
        for k, c in other.terms.items():
            _acc(t, k, c)
        return BarElement(self.ctx, t)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "BarElement":
        return BarElement(self.ctx, {k: v * c for k, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, BarElement) and self.terms == other.terms

    def is_zero(self):
        return not self.terms

    def degrees(self) -> set:
        return {len(k[1]) for k in self.terms}


def _bar_add(out: Dict[BarKey, Scalar], a0: CrossedElement, middle: Tuple[CrossedElement, ...],
             last: CrossedElement, c) -> None:
    ctx = a0.ctx
    unit = _unit_key(ctx)
    mids = [[(k, v) for k, v in _akeys(m) if k != unit] for m in middle]
    for (k0, c0) in _akeys(a0):
        for (kl, cl) in _akeys(last):
            for combo in itertools.product(*mids):
                coef = c * c0 * cl
                for _, v in combo:
                    coef = coef * v
                _acc(out, (k0, tuple(k for k, _ in combo), kl), coef)


def bar_lmul(a: CrossedElement, x: BarElement) -> BarElement:
    ctx = x.ctx
    out: Dict[BarKey, Scalar] = {}
    for (k0, mids, kl), c in x.terms.items():
        for k, v in _akeys(cp_mul(a, _abasis(ctx, k0))):
            _acc(out, (k, mids, kl), c * v)
    return BarElement(ctx, out)


def bar_rmul(x: BarElement, b: CrossedElement) -> BarElement:
    ctx = x.ctx
    out: Dict[BarKey, Scalar] = {}
    for (k0, mids, kl), c in x.terms.items():
        for k, v in _akeys(cp_mul(_abasis(ctx, kl), b)):
            _acc(out, (k0, mids, k), c * v)
    return BarElement(ctx, out)


def bar_differential(x: BarElement) -> BarElement:
    """b'(a0 (x) ... (x) a_{n+1}) = sum_i (-1)^i a0 (x) ... (x) a_i a_{i+1} (x) ...  (n >= 1)."""
    ctx = x.ctx
    out: Dict[BarKey, Scalar] = {}
    for (k0, mids, kl), c in x.terms.items():
        n = len(mids)
        if n == 0:
            raise ResolutionError("b' is applied to degree >= 1 only")
        slots = [k0] + list(mids) + [kl]
        for i in range(n + 1):
            prod = cp_mul(_abasis(ctx, slots[i]), _abasis(ctx, slots[i + 1]))
            sign = -c if i % 2 else c
            els = [_abasis(ctx, k) for k in slots[:i]] + [prod] + [_abasis(ctx, k) for k in slots[i + 2:]]
            _bar_add(out, els[0], tuple(els[1:-1]), els[-1], sign)
    return BarElement(ctx, out)


def star_shuffle(ctx: AlgebraContext, gword: Sequence[int], qword: Sequence[CrossedElement]) -> List[Tuple[int, Tuple[CrossedElement, ...]]]:
    """(w_g1 (x) ... (x) w_gs) * (Q_1 (x) ... (x) Q_r) as signed tensor words."""
    gword = tuple(gword)
    qword = tuple(qword)
    if not gword:
        return [(1, qword)]
    if not qword:
        return [(1, tuple(ctx.w(g) for g in gword))]
    gs = gword[-1]
    out = []
    for i in range(len(qword) + 1):
        twisted = tuple(_act_element(ctx, gs, Q) for Q in qword[:i])
        for sign, word in star_shuffle(ctx, gword[:-1], twisted):
            out.append((sign * (-1) ** i, word + (ctx.w(gs),) + qword[i:]))
    return out


def _act_element(ctx: AlgebraContext, g: int, Q: CrossedElement) -> CrossedElement:
    """The action of g on the polynomial part (Q is expected in S(V))."""
    return CrossedElement(ctx, {h: ctx.act(g, P) for h, P in Q.comps.items()})


def _perm_sign(p: Sequence[int]) -> int:
    s = 1
    p = list(p)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def theta_closed(ctx: AlgebraContext, gword: Sequence[int], ext: Sequence[int]) -> BarElement:
    r = len(ext)
    one = ctx.one()
    out: Dict[BarKey, Scalar] = {}
    sr = (-1) ** r
    for perm in itertools.permutations(range(r)):
        sg = _perm_sign(perm)
        vs = tuple(ctx.var(ext[p]) for p in perm)
        for sign, word in star_shuffle(ctx, gword, vs):
            _bar_add(out, one, word, one, ctx.field(sr * sg * sign))
    return BarElement(ctx, out)


def _bar_h(x: BarElement) -> BarElement:
    """a0 (x) ... (x) a_n (x) a_{n+1}  ->  a0 (x) ... (x) a_{n+1} (x) 1."""
    ctx = x.ctx
    unit = _unit_key(ctx)
    out: Dict[BarKey, Scalar] = {}
    for (k0, mids, kl), c in x.terms.items():
        if kl == unit:
            continue
        _acc(out, (k0, mids + (kl,), unit), c)
    return BarElement(ctx, out)


class ThetaRecursive:
    def __init__(self, ctx: AlgebraContext, max_total: int = 3):
        self.ctx = ctx
        self.max_total = max_total
        self._memo: Dict[Tuple[GWord, Ext], BarElement] = {}

    def basis(self, gw: GWord, E: Ext) -> BarElement:
        key = (gw, E)
        if key in self._memo:
            return self._memo[key]
        ctx = self.ctx
        n = len(gw) + len(E)
        if n > self.max_total:
            raise ResolutionError(f"theta requested in total degree {n} > bound {self.max_total}")
        if n == 0:
            one = ctx.one()
            v = BarElement.make(one, (), one)
        else:
            dx = x_diff(XElement.basis(ctx, gw, E))
            v = _bar_h(self.apply(dx)).scale((-1) ** n)
        self._memo[key] = v
        return v

    def apply(self, x: XElement) -> BarElement:
        ctx = self.ctx
        out = BarElement(ctx)
        for (am, ag, gw, E, bm, bg), c in x.terms.items():
            v = self.basis(gw, E)
            v = bar_rmul(bar_lmul(ctx.monomial(am, ag), v), ctx.monomial(bm, bg))
            out = out + v.scale(c)
        return out


def theta_recursive(ctx: AlgebraContext, gword: Sequence[int], ext: Sequence[int], max_total: int = 3,
                    cache: Optional[ThetaRecursive] = None) -> BarElement:
    t = cache or ThetaRecursive(ctx, max_total)
    return t.basis(tuple(gword), tuple(ext))


def theta_apply(ctx: AlgebraContext, x: XElement) -> BarElement:
    """theta through the closed formula, extended as a bimodule map."""
    out = BarElement(ctx)
    memo: Dict[Tuple[GWord, Ext], BarElement] = {}
    for (am, ag, gw, E, bm, bg), c in x.terms.items():
        if (gw, E) not in memo:
            memo[(gw, E)] = theta_closed(ctx, gw, E)
        v = bar_rmul(bar_lmul(ctx.monomial(am, ag), memo[(gw, E)]), ctx.monomial(bm, bg))
        out = out + v.scale(c)
    return out


# ---------------------------------------------------------------- checks

def resolution_check(ctx: AlgebraContext, max_total: int = 3, y_weight: int = 4, seed: int = 0,
                     bar_samples: int = 20) -> Report:
    rep = Report("resolution")
    fld, n = ctx.field, ctx.n

    # Y: boundary squared, homotopy identity, augmentation
    wit = None
    for m, E in y_basis(n, 3, min_weight=0):
        if len(E) > 3:
            continue
        x = YElement.basis(fld, n, m, E)
        if not y_boundary(y_boundary(x)).is_zero():
            wit = {"rho": list(m), "ext": list(E)}
            break
    rep.add("res.y.boundary_squared", wit is None, wit, detail="degree <= 3")
    wit = None
    for m, E in y_basis(n, y_weight):
        x = YElement.basis(fld, n, m, E, y=tuple(1 if i == 0 else 0 for i in range(n)))
        lhs = y_homotopy(y_boundary(x)) if E else YElement(fld, n)
        lhs = lhs + y_boundary(y_homotopy(x))
        if lhs != x:
            wit = {"rho": list(m), "ext": list(E)}
            break
    rep.add("res.y.homotopy", wit is None, wit, detail=f"weight 1..{y_weight}")
    P = Poly.var(fld, n, 0) * Poly.var(fld, n, n - 1) + Poly.constant(fld, n, 3)
    rep.add("res.y.augmentation", y_mu(y_sigma0(P)) == P)

    rd = RecursiveDifferentials(ctx)
    th = ThetaRecursive(ctx, max_total)
    bases = [(r, s, b) for tot in range(max_total + 1) for r in range(tot + 1)
             for s in [tot - r] if r <= n for b in x_basis(ctx, r, s)]

    wit = {}
    for r, s, (gw, E) in bases:
        x = XElement.basis(ctx, gw, E)
        G = ctx.group
        lab = {"g": [G.label(g) for g in gw], "ext": [f"x{i + 1}" for i in E]}
        if "res.x.dd" not in wit and not x_diff(x_diff(x)).is_zero():
            wit["res.x.dd"] = lab
        if s >= 1 and "res.x.d1_recursive" not in wit:
            if rd.d1_basis(gw, E) != x_diff_d1(x):
                wit["res.x.d1_recursive"] = lab
        if s >= 2 and "res.x.d2_vanishes" not in wit:
            if not rd.d2_basis(gw, E).is_zero():
                wit["res.x.d2_vanishes"] = lab
        if "res.theta.recursive" not in wit and th.basis(gw, E) != theta_closed(ctx, gw, E):
            wit["res.theta.recursive"] = lab
        if r + s >= 1 and "res.theta.chain_map" not in wit:
            if bar_differential(theta_closed(ctx, gw, E)) != theta_apply(ctx, x_diff(x)):
                wit["res.theta.chain_map"] = lab
    detail = f"all basis elements with r + s <= {max_total}"
    for cid in ("res.x.dd", "res.x.d1_recursive", "res.x.d2_vanishes", "res.theta.recursive", "res.theta.chain_map"):
        rep.add(cid, cid not in wit, wit.get(cid), detail=detail)

    rng = random.Random(seed)
    wit = None
    for _ in range(bar_samples):
        parts = [random_element(ctx, rng, max_degree=2, max_support=2, max_terms=2) for _ in range(5)]
        x = BarElement.make(parts[0], parts[1:4], parts[4])
        if not bar_differential(bar_differential(x)).is_zero():
            wit = {"sample": _}
            break
    rep.add("res.bar.squared", wit is None, wit, detail=f"{bar_samples} random degree-3 elements, seed {seed}")

    wit = None
    for r, s, (gw, E) in bases:
        x = XElement.basis(ctx, gw, E)
        y = x_rmul(x, ctx.var(0) * ctx.var(n - 1))
        if not sigma0_homotopy(sigma0_homotopy(y)).is_zero():
            wit = {"g": list(gw), "ext": list(E)}
            break
    rep.add("res.sigma0.squared", wit is None, wit)
    return rep
