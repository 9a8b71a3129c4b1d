"""H_q-module algebra structures on A = S(V) #_f G.

A structure is determined by an automorphism alpha (alpha_hat on V plus a
character on G), a character for varsigma, two distinguished variables
x1, x2 whose complements V1, V2 are the kernels of the skew derivations,
and the data  delta_i(x_i) = sum_j P^(i)_{g_ij} w_{g_ij}.

Condition ids in reports:

* ``prop.*``   prerequisites on alpha (bijective, G-equivariant, character)
* ``cor2.*``   the second-case checklist (items a-d and 1-6)
* ``hq.cond*`` the four defining relations of an H_q-action on generators
* ``thm.item*`` the general checklist, valid without the aligned-basis
  hypotheses
* ``remark.*`` derived relations between nu, omega and lambda
"""
from __future__ import annotations

import itertools
import random
from typing import Dict, List, Optional, Sequence, Tuple

from .crossed_product import AlgebraContext, CrossedElement, format_element, random_element
from .groups import Character, is_union_of_classes, validate_character
from .polynomials import LinearEndo, Monomial, Poly, format_poly, substitute
from .reports import Check, Report
from .scalars import QParam, Scalar, qint


class StructureError(ValueError):
    def __init__(self, condition: str, message: str):
        super().__init__(f"[{condition}] {message}")
        self.condition = condition
        self.message = message


class ClosedFormError(ValueError):
    pass


ALPHA, VARSIGMA, ALPHA_INV, VARSIGMA_INV = "alpha", "varsigma", "alpha_inv", "varsigma_inv"


class HqStructure:
    def __init__(self, ctx: AlgebraContext, alpha_hat: LinearEndo, chi_alpha: Character, chi_sigma: Character,
                 x1: int, x2: int, delta1_data: Sequence[Tuple[int, Poly]], delta2_data: Sequence[Tuple[int, Poly]],
                 deltabar1: Optional[Dict[int, CrossedElement]] = None,
                 deltabar2: Optional[Dict[int, CrossedElement]] = None,
                 q_override: Optional[Scalar] = None):
        self.ctx = ctx
        self.alpha_hat = alpha_hat
        self.chi_alpha = chi_alpha
        self.chi_sigma = chi_sigma
        self.x1 = x1
        self.x2 = x2
        self.delta1_data = list(delta1_data)
        self.delta2_data = list(delta2_data)
        self.deltabar1 = dict(deltabar1 or {})
        self.deltabar2 = dict(deltabar2 or {})
        self.q_override = q_override
        self._derive()
        self._delta_cache: Dict[Tuple[int, Monomial, int], CrossedElement] = {}

    # derivation of varsigma_hat, lambda, nu, omega, q
    def _derive(self) -> None:
        ctx, fld, n = self.ctx, self.ctx.field, self.ctx.n
        G = ctx.group
        if self.x1 == self.x2 or not (0 <= self.x1 < n and 0 <= self.x2 < n):
            raise StructureError("cor2.a.codim", "x1 and x2 must be distinct variables")
        if not self.delta1_data or not self.delta2_data:
            raise StructureError("cor2.d", "delta data lists must be nonempty")
        for i, data in ((1, self.delta1_data), (2, self.delta2_data)):
            for g, P in data:
                if P.is_zero():
                    raise StructureError("cor2.d", f"P^({i})_{G.label(g)} is zero")
            gs = [g for g, _ in data]
            if len(set(gs)) != len(gs):
                raise StructureError("cor2.b.classes", f"repeated group element in delta{i} data")
        if self.alpha_hat.det() == 0:
            raise StructureError("prop.alpha.bijective", "alpha_hat is not invertible")
        self.alpha_hat_inv = self.alpha_hat.inverse()
        self.g11 = self.delta1_data[0][0]
        self.g21 = self.delta2_data[0][0]
        A = self.alpha_hat
        via1 = A @ ctx.rep(G.inv[self.g11])
        via2 = A @ ctx.rep(self.g21)
        cols = []
        for j in range(n):
            c1, c2 = via1.column(j), via2.column(j)
            if j != self.x1 and j != self.x2 and c1 != c2:
                raise StructureError("cor2.b.eq8",
                                     f"varsigma_hat is inconsistent on x{j + 1} (V1 and V2 formulas disagree)")
            cols.append(c1 if j != self.x1 else c2)
        self.varsigma_hat = LinearEndo(fld, [[cols[j][i] for j in range(n)] for i in range(n)])
        if self.varsigma_hat.det() == 0:
            raise StructureError("hq.cond1", "varsigma_hat is not invertible")
        self.varsigma_hat_inv = self.varsigma_hat.inverse()
        self.sigma_alpha_inv = self.varsigma_hat @ self.alpha_hat_inv
        self.lam = {}
        for g in G.elements:
            M = ctx.rep(g).matrix
            self.lam[(1, g)] = M[self.x1][self.x1]
            self.lam[(2, g)] = M[self.x2][self.x2]
        for (i, g), v in self.lam.items():
            if v == 0:
                raise StructureError("cor2.a.stable", f"lambda_{i},{G.label(g)} vanishes")
        self.nu = (A.matrix[self.x1][self.x1], A.matrix[self.x2][self.x2])
        S = self.varsigma_hat.matrix
        self.omega = (S[self.x1][self.x1], S[self.x2][self.x2])
        self.qparam = QParam.of(self.lam[(1, self.g11)] * self.lam[(1, self.g21)])

    @property
    def q(self) -> Scalar:
        return self.qparam.value

    @property
    def l(self) -> Optional[int]:
        return self.qparam.truncation

    def V(self, i: int) -> List[int]:
        x = self.x1 if i == 1 else self.x2
        return [j for j in range(self.ctx.n) if j != x]

    def data(self, i: int) -> List[Tuple[int, Poly]]:
        return self.delta1_data if i == 1 else self.delta2_data

    def P(self, i: int, g: int) -> Poly:
        for h, P in self.data(i):
            if h == g:
                return P
        return Poly.zero(self.ctx.field, self.ctx.n)

    # automorphisms
    def _auto(self, which: str):
        if which == ALPHA:
            return self.alpha_hat, self.chi_alpha.values, False
        if which == ALPHA_INV:
            return self.alpha_hat_inv, self.chi_alpha.values, True
        if which == VARSIGMA:
            return self.varsigma_hat, self.chi_sigma.values, False
        if which == VARSIGMA_INV:
            return self.varsigma_hat_inv, self.chi_sigma.values, True
        raise ValueError(f"unknown automorphism {which!r}")

    def apply_automorphism(self, which: str, a: CrossedElement) -> CrossedElement:
        M, chi, invert = self._auto(which)
        comps = {}
        for g, P in a.comps.items():
            c = chi[g]
            if invert:
                c = 1 / c
            comps[g] = substitute(M, P).scale(c)
        return CrossedElement(self.ctx, comps)

    def alpha_power(self, e: int, a: CrossedElement) -> CrossedElement:
        which = ALPHA if e >= 0 else ALPHA_INV
        for _ in range(abs(e)):
            a = self.apply_automorphism(which, a)
        return a

    # skew derivations
    def delta_hat(self, i: int, j: int) -> CrossedElement:
        """delta_i on the basis vector x_{j+1}."""
        x = self.x1 if i == 1 else self.x2
        if j != x:
            return self.ctx.zero()
        return CrossedElement(self.ctx, {g: P for g, P in self.data(i)})

    def delta_bar(self, i: int, g: int) -> CrossedElement:
        d = self.deltabar1 if i == 1 else self.deltabar2
        return d.get(g, self.ctx.zero())

    def delta_basis(self, i: int, m: Monomial, g: int) -> CrossedElement:
        """delta_i(x^m w_g), variables expanded in index order."""
        key = (i, m, g)
        hit = self._delta_cache.get(key)
        if hit is not None:
            return hit
        ctx = self.ctx
        fld, n = ctx.field, ctx.n
        seq = [j for j, e in enumerate(m) for _ in range(e)]
        x = self.x1 if i == 1 else self.x2
        one = Poly.constant(fld, n, 1)
        # prefix maps: alpha for delta1, varsigma o alpha^-1 for delta2
        pre_map = self.alpha_hat if i == 1 else self.sigma_alpha_inv
        suffix = [one] * (len(seq) + 1)
        for pos in range(len(seq) - 1, -1, -1):
            v = seq[pos]
            im = self.varsigma_hat.image(v) if i == 1 else Poly.var(fld, n, v)
            suffix[pos] = im * suffix[pos + 1]
        tail_char = self.chi_sigma(g) if i == 1 else fld.one
        out = ctx.zero()
        prefix = one
        dh = self.delta_hat(i, x)
        for pos, v in enumerate(seq):
            if v == x:
                left = ctx.poly(prefix)
                right = ctx.poly(suffix[pos + 1].scale(tail_char), g)
                out = out + left * dh * right
            prefix = prefix * pre_map.image(v)
        bar = self.delta_bar(i, g)
        if not bar.is_zero():
            out = out + ctx.poly(prefix) * bar
        self._delta_cache[key] = out
        return out

    def delta_apply(self, i: int, a: CrossedElement) -> CrossedElement:
        if a.ctx is not self.ctx:
            raise ValueError("element from a different context")
        acc: Dict[int, Dict[Monomial, Scalar]] = {}
        for g, P in a.comps.items():
            for m, c in P.terms.items():
                for h, Q in self.delta_basis(i, m, g).comps.items():
                    t = acc.setdefault(h, {})
                    for mm, cc in Q.terms.items():
                        v = t.get(mm)
                        t[mm] = c * cc if v is None else v + c * cc
        return CrossedElement(self.ctx, {h: Poly(self.ctx.field, self.ctx.n, t) for h, t in acc.items()})

    def delta_power(self, i: int, s: int, a: CrossedElement) -> CrossedElement:
        for _ in range(s):
            if a.is_zero():
                break
            a = self.delta_apply(i, a)
        return a

    # closed-form powers
    def closed_form_hypotheses(self) -> Optional[str]:
        ctx = self.ctx
        G = ctx.group
        for i in (1, 2):
            gs = [g for g, _ in self.data(i)]
            for g in gs:
                M = ctx.rep(g)
                for x in (self.x1, self.x2):
                    col = M.column(x)
                    if any(c != 0 for r, c in enumerate(col) if r != x):
                        return f"x{x + 1} is not an eigenvector of {G.label(g)}"
            for x, lam_i in ((self.x1, 1), (self.x2, 2)):
                vals = {self.lam[(lam_i, g)] for g in gs}
                if len(vals) > 1:
                    return f"lambda_{lam_i} is not uniform across the delta{i} group elements"
        return None

    def delta_power_closed(self, i: int, s: int, m: Monomial, g: int) -> CrossedElement:
        why = self.closed_form_hypotheses()
        if why is not None:
            raise ClosedFormError(f"closed-form hypotheses fail ({why}); use delta_power (iterated delta_apply)")
        ctx = self.ctx
        fld, n, G, f = ctx.field, ctx.n, ctx.group, ctx.cocycle
        m = tuple(m)
        if s == 0:
            return ctx.monomial(m, g)
        x = self.x1 if i == 1 else self.x2
        r = m[x]
        if s > r:
            return ctx.zero()
        qfac = fld.one
        for k in range(s):
            qfac = qfac * qint(r - k, self.q)
        data = self.data(i)
        rest = list(m)
        rest[x] -= s
        rest = tuple(rest)
        out = ctx.zero()
        if i == 1:
            mono = ctx.monomial(rest, G.identity)
            base = self.alpha_power(s, mono).component(G.identity)
            for hs in itertools.product(range(len(data)), repeat=s):
                gl = [data[h][0] for h in hs]
                c = self.chi_sigma(g) ** s
                for k in range(1, s):
                    c = c * self.chi_sigma(gl[k - 1]) ** (s - k)
                for k in range(2, s + 1):
                    c = c * self.chi_alpha(gl[k - 1]) ** (k - 1)
                acc = g
                coc = fld.one
                Pprod = Poly.constant(fld, n, 1)
                for k in range(1, s + 1):
                    coc = coc * f(gl[k - 1], acc)
                    acc = G.m(gl[k - 1], acc)
                    Pk = self.alpha_power(s - 1, ctx.poly(data[hs[k - 1]][1])).component(G.identity)
                    Pprod = Pprod * Pk
                out = out + ctx.poly((Pprod * base).scale(c * qfac * coc), acc)
        else:
            lam = self.lam[(2, self.g21)]
            d = lam ** (s * r - s * (s + 1) // 2)
            x2part = [0] * n
            x2part[x] = m[x] - s
            others = list(m)
            others[x] = 0
            twist = ctx.act(G.power(self.g21, s), Poly.monomial(fld, tuple(others)))
            base = Poly.monomial(fld, tuple(x2part)) * twist
            for hs in itertools.product(range(len(data)), repeat=s):
                gl = [data[h][0] for h in hs]
                acc = g
                coc = fld.one
                for k in range(1, s + 1):
                    coc = coc * f(gl[k - 1], acc)
                    acc = G.m(gl[k - 1], acc)
                Pprod = Poly.constant(fld, n, 1)
                for k in range(s):
                    Pprod = Pprod * ctx.act(G.power(self.g21, k), data[hs[s - k - 1]][1])
                out = out + ctx.poly((Pprod * base).scale(d * qfac * coc), acc)
        return out

    def generators(self) -> List[Tuple[str, CrossedElement]]:
        ctx = self.ctx
        gens = [(f"x{j + 1}", ctx.var(j)) for j in range(ctx.n)]
        gens += [(f"w[{ctx.group.label(g)}]", ctx.w(g)) for g in ctx.group.elements]
        return gens


def build_structure(ctx: AlgebraContext, alpha_hat: LinearEndo, chi_alpha: Character, chi_sigma: Character,
                    x1: int, x2: int, delta1_data, delta2_data, deltabar1=None, deltabar2=None,
                    q_override=None) -> HqStructure:
    return HqStructure(ctx, alpha_hat, chi_alpha, chi_sigma, x1, x2, delta1_data, delta2_data,
                       deltabar1, deltabar2, q_override)


def apply_automorphism(st: HqStructure, which: str, a: CrossedElement) -> CrossedElement:
    return st.apply_automorphism(which, a)


def delta_apply(st: HqStructure, i: int, a: CrossedElement) -> CrossedElement:
    return st.delta_apply(i, a)


def delta_power_closed(st: HqStructure, i: int, s: int, m: Monomial, g: int) -> CrossedElement:
    return st.delta_power_closed(i, s, m, g)


# validation helpers

def _fmt(a) -> str:
    if isinstance(a, CrossedElement):
        return format_element(a)
    if isinstance(a, Poly):
        return format_poly(a)
    return str(a)


def _first(items, pred):
    for it in items:
        w = pred(*it) if isinstance(it, tuple) else pred(it)
        if w is not None:
            return w
    return None


def _hyperplane_stable(M: LinearEndo, x: int) -> bool:
    return all(M.matrix[x][j] == 0 for j in range(M.n) if j != x)


def _check_alpha(st: HqStructure, rep: Report) -> None:
    ctx = st.ctx
    G = ctx.group
    rep.add("prop.alpha.bijective", st.alpha_hat.det() != 0)
    bad = next((G.label(g) for g in G.elements if st.alpha_hat @ ctx.rep(g) != ctx.rep(g) @ st.alpha_hat), None)
    rep.add("prop.alpha.equivariant", bad is None, None if bad is None else {"g": bad})
    c = validate_character(G, st.chi_alpha, "prop.chi_alpha")
    rep.append(c)


def _check_nilpotency(st: HqStructure, rep: Report, cid: str, spot: bool, seed: int = 0) -> None:
    l = st.l
    if l is None:
        rep.add(cid, True, detail="vacuous: q = 1 or q is not a root of unity")
        return
    wit = None
    for i in (1, 2):
        for name, a in st.generators():
            if not st.delta_power(i, l, a).is_zero():
                wit = {"delta": i, "generator": name}
                break
        if wit:
            break
    rep.add(cid, wit is None, wit)
    if spot:
        rng = random.Random(seed)
        wit = None
        for _ in range(20):
            a = random_element(st.ctx, rng, max_degree=l + 2, max_support=2)
            for i in (1, 2):
                if not st.delta_power(i, l, a).is_zero():
                    wit = {"delta": i, "element": format_element(a)}
                    break
            if wit:
                break
        rep.add(cid + ".spot", wit is None, wit)


def _check_hq_relations(st: HqStructure, rep: Report) -> None:
    rep.add("hq.cond1", st.varsigma_hat.det() != 0 and all(c != 0 for c in st.chi_sigma.values))
    wit = None
    for name, a in st.generators():
        if st.delta_apply(1, st.delta_apply(2, a)) != st.delta_apply(2, st.delta_apply(1, a)):
            wit = {"generator": name}
            break
    rep.add("hq.cond2", wit is None, wit)
    wit = None
    for name, a in st.generators():
        for i in (1, 2):
            lhs = st.delta_apply(i, st.apply_automorphism(VARSIGMA, a))
            rhs = st.apply_automorphism(VARSIGMA, st.delta_apply(i, a)).scale(st.q)
            if lhs != rhs:
                wit = {"delta": i, "generator": name}
                break
        if wit:
            break
    rep.add("hq.cond3", wit is None, wit)
    _check_nilpotency(st, rep, "hq.cond4", spot=False)


def validate_second_case(st: HqStructure, seed: int = 0) -> Report:
    rep = Report("second-case")
    ctx = st.ctx
    G, f, fld = ctx.group, ctx.cocycle, ctx.field
    _check_alpha(st, rep)

    # a) V1, V2 are alpha-stable G-submodules
    bad = None
    for x, i in ((st.x1, 1), (st.x2, 2)):
        for g in G.elements:
            if not _hyperplane_stable(ctx.rep(g), x):
                bad = {"V": i, "g": G.label(g)}
                break
        if bad is None and not _hyperplane_stable(st.alpha_hat, x):
            bad = {"V": i, "map": "alpha_hat"}
        if bad:
            break
    rep.add("cor2.a.stable", bad is None, bad)

    # b) unions of conjugacy classes and the agreement conditions
    g1 = [g for g, _ in st.delta1_data]
    g2 = [g for g, _ in st.delta2_data]
    wit = None
    for i, gs in ((1, g1), (2, g2)):
        w = is_union_of_classes(G, gs)
        if w is not None:
            wit = {"delta": i, "conjugator": G.label(w[0]), "element": G.label(w[1])}
            break
    rep.add("cor2.b.classes", wit is None, wit)

    def same_on(gs_a, gs_b, cols, invert_a=False):
        for a in gs_a:
            for b in gs_b:
                Ma = ctx.rep(G.inv[a] if invert_a else a)
                Mb = ctx.rep(b)
                for j in cols:
                    if Ma.column(j) != Mb.column(j):
                        return {"pair": [G.label(a), G.label(b)], "variable": f"x{j + 1}"}
        return None

    rep.add("cor2.b.eq6", (w := same_on(g1, g1, st.V(1))) is None, w)
    rep.add("cor2.b.eq7", (w := same_on(g2, g2, st.V(2))) is None, w)
    both = [j for j in range(ctx.n) if j not in (st.x1, st.x2)]
    rep.add("cor2.b.eq8", (w := same_on(g1, g2, both, invert_a=True)) is None, w)

    # c) chi_varsigma is a homomorphism
    c = validate_character(G, st.chi_sigma, "cor2.c")
    c.id = "cor2.c"
    rep.append(c)

    # d) P^(i) in S(V_i)
    wit = None
    for i in (1, 2):
        for g, P in st.data(i):
            if not P.uses_only(st.V(i)) or P.is_zero():
                wit = {"delta": i, "g": G.label(g), "P": format_poly(P)}
                break
        if wit:
            break
    rep.add("cor2.d", wit is None, wit)

    # 1) lambda products
    q, lam = st.q, st.lam
    wit = None
    for g in g1:
        if lam[(1, g)] * lam[(1, st.g21)] != q:
            wit = {"lambda_1": [G.label(g), G.label(st.g21)]}
    for h in g2:
        if lam[(2, st.g11)] * lam[(2, h)] * q != 1:
            wit = {"lambda_2": [G.label(st.g11), G.label(h)]}
    if st.q_override is not None and st.q_override != q:
        wit = {"q_override": fld.format(st.q_override), "derived_q": fld.format(q)}
    rep.add("cor2.item1", wit is None, wit)

    # 2), 3) covariance of the P's
    for i, item in ((1, "cor2.item2"), (2, "cor2.item3")):
        wit = None
        for g in G.elements:
            ca, cs = st.chi_alpha(g), st.chi_sigma(g)
            chi = (cs / ca) if i == 1 else (ca / cs)
            for gij, P in st.data(i):
                conj = G.conj(g, gij)
                lhs = ctx.act(g, P)
                rhs = st.P(i, conj).scale(lam[(i, g)] * chi * f(conj, g) / f(g, gij))
                if lhs != rhs:
                    wit = {"g": G.label(g), "g_i": G.label(gij), "lhs": format_poly(lhs), "rhs": format_poly(rhs)}
                    break
            if wit:
                break
        rep.add(item, wit is None, wit)

    # 4) alpha eigen-equations
    wit = None
    for i in (1, 2):
        for gij, P in st.data(i):
            lhs = substitute(st.alpha_hat, P)
            rhs = P.scale(st.nu[i - 1] / st.chi_alpha(gij))
            if lhs != rhs:
                wit = {"delta": i, "g": G.label(gij), "alpha(P)": format_poly(lhs), "expected": format_poly(rhs)}
                break
        if wit:
            break
    rep.add("cor2.item4", wit is None, wit)

    # 5) kernel membership
    s1 = CrossedElement(ctx, {g: P for g, P in st.delta1_data})
    s2 = CrossedElement(ctx, {g: P for g, P in st.delta2_data})
    d21 = st.delta_apply(2, s1)
    d12 = st.delta_apply(1, s2)
    wit = None
    if not d21.is_zero():
        wit = {"delta2(sum P1 w)": format_element(d21)}
    elif not d12.is_zero():
        wit = {"delta1(sum P2 w)": format_element(d12)}
    rep.add("cor2.item5", wit is None, wit)
    if st.closed_form_hypotheses() is None:
        rep.append(kernel_support_check(st))

    # 6) nilpotency on generators plus random spot checks
    _check_nilpotency(st, rep, "cor2.item6", spot=True, seed=seed)

    _check_hq_relations(st, rep)

    w1 = st.omega[0] == lam[(1, st.g21)] * st.nu[0]
    w2 = st.nu[1] == lam[(2, st.g11)] * st.omega[1]
    rep.add("remark.omega_nu", w1 and w2,
            None if (w1 and w2) else {"omega": [fld.format(x) for x in st.omega],
                                      "nu": [fld.format(x) for x in st.nu]})
    return rep


def kernel_support_check(st: HqStructure) -> Check:
    """Variable-support criterion for item 5 (valid under the eigenvector hypotheses)."""
    ctx = st.ctx
    G = ctx.group
    l = st.l
    both = set(j for j in range(ctx.n) if j not in (st.x1, st.x2))
    for i, other in ((1, st.x2), (2, st.x1)):
        for g, P in st.data(i):
            for m in P.terms:
                for j, e in enumerate(m):
                    if e == 0 or j in both:
                        continue
                    if j == other and l is not None and e % l == 0:
                        continue
                    return Check("prop.kernel_support", False,
                                 {"delta": i, "g": G.label(g), "variable": f"x{j + 1}", "exponent": e})
    return Check("prop.kernel_support", True)


def validate_general(st: HqStructure) -> Report:
    rep = Report("general")
    ctx = st.ctx
    G, f, fld = ctx.group, ctx.cocycle, ctx.field
    n = ctx.n
    _check_alpha(st, rep)
    X = [ctx.var(j) for j in range(n)]
    A = lambda a: st.apply_automorphism(ALPHA, a)
    S = lambda a: st.apply_automorphism(VARSIGMA, a)
    Ainv = lambda a: st.apply_automorphism(ALPHA_INV, a)
    dh = st.delta_hat
    db = st.delta_bar

    def lin(M: LinearEndo, j: int) -> CrossedElement:
        return ctx.poly(M.image(j))

    def dh_lin(i: int, P: Poly) -> CrossedElement:
        """delta_hat_i on a linear form."""
        out = ctx.zero()
        for m, c in P.terms.items():
            j = m.index(1)
            out = out + dh(i, j).scale(c)
        return out

    # item 1
    wit = None
    if st.varsigma_hat.det() == 0:
        wit = {"reason": "varsigma_hat not bijective"}
    else:
        for g in G.elements:
            if st.varsigma_hat @ ctx.rep(g) != ctx.rep(g) @ st.varsigma_hat:
                wit = {"reason": "varsigma_hat not G-linear", "g": G.label(g)}
                break
    if wit is None and not validate_character(G, st.chi_sigma).ok:
        wit = {"reason": "chi_varsigma not a homomorphism"}
    rep.add("thm.item1", wit is None, wit)

    # item 2: well-definedness and multiplicativity
    wit = None
    for v in range(n):
        for w in range(v + 1, n):
            l1 = dh(1, v) * lin(st.varsigma_hat, w) + lin(st.alpha_hat, v) * dh(1, w)
            r1 = dh(1, w) * lin(st.varsigma_hat, v) + lin(st.alpha_hat, w) * dh(1, v)
            if l1 != r1:
                wit = {"eq": "delta1 well-defined", "pair": [f"x{v + 1}", f"x{w + 1}"]}
                break
            sa = st.sigma_alpha_inv
            l2 = dh(2, v) * X[w] + lin(sa, v) * dh(2, w)
            r2 = dh(2, w) * X[v] + lin(sa, w) * dh(2, v)
            if l2 != r2:
                wit = {"eq": "delta2 well-defined", "pair": [f"x{v + 1}", f"x{w + 1}"]}
                break
        if wit:
            break
    if wit is None:
        for g in G.elements:
            wg = ctx.w(g)
            ca, cs = st.chi_alpha(g), st.chi_sigma(g)
            for v in range(n):
                gv = ctx.act(g, Poly.var(fld, n, v))
                lhs = dh_lin(1, gv) * wg.scale(cs) + A(ctx.poly(gv)) * db(1, g)
                rhs = db(1, g) * lin(st.varsigma_hat, v) + wg.scale(ca) * dh(1, v)
                if lhs != rhs:
                    wit = {"eq": "delta1 on w_g v", "g": G.label(g), "v": f"x{v + 1}"}
                    break
                lhs = dh_lin(2, gv) * wg + S(Ainv(ctx.poly(gv))) * db(2, g)
                rhs = db(2, g) * X[v] + wg.scale(cs / ca) * dh(2, v)
                if lhs != rhs:
                    wit = {"eq": "delta2 on w_g v", "g": G.label(g), "v": f"x{v + 1}"}
                    break
            if wit:
                break
            for h in G.elements:
                wh = ctx.w(h)
                lhs = db(1, G.m(g, h)).scale(f(g, h))
                rhs = db(1, g) * wh.scale(st.chi_sigma(h)) + wg.scale(ca) * db(1, h)
                if lhs != rhs:
                    wit = {"eq": "delta1 on w_g w_h", "g": G.label(g), "h": G.label(h)}
                    break
                lhs = db(2, G.m(g, h)).scale(f(g, h))
                rhs = db(2, g) * wh + wg.scale(cs / ca) * db(2, h)
                if lhs != rhs:
                    wit = {"eq": "delta2 on w_g w_h", "g": G.label(g), "h": G.label(h)}
                    break
            if wit:
                break
    rep.add("thm.item2", wit is None, wit)

    # item 3: delta_hat_i o alpha_hat = alpha o delta_hat_i
    wit = None
    for i in (1, 2):
        for v in range(n):
            if dh_lin(i, st.alpha_hat.image(v)) != A(dh(i, v)):
                wit = {"delta": i, "v": f"x{v + 1}"}
                break
        if wit:
            break
    rep.add("thm.item3", wit is None, wit)

    # item 4
    wit = None
    for i in (1, 2):
        for g in G.elements:
            if db(i, g).scale(st.chi_alpha(g)) != A(db(i, g)):
                wit = {"delta": i, "g": G.label(g)}
                break
        if wit:
            break
    rep.add("thm.item4", wit is None, wit)

    # item 5
    ok = st.varsigma_hat @ st.alpha_hat == st.alpha_hat @ st.varsigma_hat
    rep.add("thm.item5", ok, None if ok else {"reason": "varsigma_hat and alpha_hat do not commute"})

    # item 6
    q = st.q
    wit = None
    for v in range(n):
        if st.delta_apply(2, dh(1, v)) != st.delta_apply(1, dh(2, v)):
            wit = {"eq": "delta2 o delta_hat1 = delta1 o delta_hat2", "v": f"x{v + 1}"}
            break
        for i in (1, 2):
            if dh_lin(i, st.varsigma_hat.image(v)) != S(dh(i, v)).scale(q):
                wit = {"eq": "delta_hat_i o varsigma_hat = q varsigma o delta_hat_i", "delta": i, "v": f"x{v + 1}"}
                break
        if wit:
            break
    if wit is None:
        for g in G.elements:
            if st.delta_apply(2, db(1, g)) != st.delta_apply(1, db(2, g)):
                wit = {"eq": "delta2 o deltabar1 = delta1 o deltabar2", "g": G.label(g)}
                break
            for i in (1, 2):
                if db(i, g).scale(st.chi_sigma(g)) != S(db(i, g)).scale(q):
                    wit = {"eq": "chi_varsigma deltabar = q varsigma deltabar", "delta": i, "g": G.label(g)}
                    break
            if wit:
                break
    sub = Report("tmp")
    _check_nilpotency(st, sub, "thm.item6.nilpotent", spot=False)
    if wit is None and not sub.ok:
        wit = sub.checks[0].witness
    rep.add("thm.item6", wit is None, wit)
    return rep


def validate_structure(st: HqStructure, mode: str = "second-case", seed: int = 0) -> Report:
    if mode == "second-case":
        return validate_second_case(st, seed)
    if mode == "general":
        return validate_general(st)
    raise ValueError(f"unknown validation mode {mode!r}")


def derived_invariants(st: HqStructure) -> Report:
    rep = Report("derived-invariants")
    ctx = st.ctx
    G, fld = ctx.group, ctx.field
    q = st.q
    wit_det = wit_lam = None
    for g1, _ in st.delta1_data:
        for g2, _ in st.delta2_data:
            d = ctx.rep(G.m(g1, g2)).det()
            if d != 1 and wit_det is None:
                wit_det = {"pair": [G.label(g1), G.label(g2)], "det": fld.format(d)}
            l1 = st.lam[(1, g1)] * st.lam[(1, g2)]
            l2 = st.lam[(2, g1)] * st.lam[(2, g2)]
            if (l1 != q or l2 * q != 1) and wit_lam is None:
                wit_lam = {"pair": [G.label(g1), G.label(g2)], "lambda1_product": fld.format(l1),
                           "lambda2_product": fld.format(l2)}
    rep.add("cor2.det1", wit_det is None, wit_det)
    rep.add("cor2.lambda_products", wit_lam is None, wit_lam)
    wit = None
    for i in (1, 2):
        for j in (1, 2):
            vals = {st.lam[(j, g)] for g, _ in st.data(i)}
            if len(vals) > 1:
                wit = {"delta": i, "lambda": j}
    rep.add("remark.lambda_uniform", wit is None, wit)
    return rep
