"""Cochains on the small resolution, the pulled-back infinitesimal and the
nontriviality verdict.

A p-cochain is a map (g_1..g_s ; x_E) -> A with r + s = p, g_i non-identity
and E a strictly increasing index tuple of size r.  Only nonzero values are
stored.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .crossed_product import AlgebraContext, CrossedElement, format_element, random_element
from .deformation import bar_coboundary, infinitesimal
from .exact_linalg import SolveOutcome, check_certificate, check_solution, solve_sparse
from .hq_structure import ALPHA_INV, HqStructure
from .polynomials import Poly, format_poly, monomials_up_to
from .reports import Report
from .resolution import BarElement, XElement, _wedge_images, theta_closed, x_basis, x_diff

Slot = Tuple[Tuple[int, ...], Tuple[int, ...]]


class Cochain:
    def __init__(self, ctx: AlgebraContext, degree: int, values: Optional[Dict[Slot, CrossedElement]] = None):
        self.ctx = ctx
        self.degree = degree
        self.values = {}
        for (gw, E), v in (values or {}).items():
            if len(gw) + len(E) != degree:
                raise ValueError(f"slot {gw}, {E} is not of total degree {degree}")
            if not v.is_zero():
                self.values[(tuple(gw), tuple(E))] = v

    def __call__(self, gw: Sequence[int], E: Sequence[int]) -> CrossedElement:
        return self.values.get((tuple(gw), tuple(E)), self.ctx.zero())

    def on_ext(self, gw: Sequence[int], combo: Dict[Tuple[int, ...], object]) -> CrossedElement:
        """Evaluate on a linear combination of exterior monomials."""
        out = self.ctx.zero()
        for E, c in combo.items():
            v = self(gw, E)
            if not v.is_zero():
                out = out + v.scale(c)
        return out

    def __eq__(self, other):
        return isinstance(other, Cochain) and self.degree == other.degree and self.values == other.values

    def __add__(self, other: "Cochain") -> "Cochain":
        vals = dict(self.values)
        for k, v in other.values.items():
            vals[k] = vals[k] + v if k in vals else v
        return Cochain(self.ctx, self.degree, vals)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "Cochain":
        return Cochain(self.ctx, self.degree, {k: v.scale(c) for k, v in self.values.items()})

    def is_zero(self) -> bool:
        return not self.values

    # degree-1 and degree-2 views
    @property
    def phi0(self) -> Dict[int, CrossedElement]:
        return {gw[0]: v for (gw, E), v in self.values.items() if len(gw) == 1 and not E}

    @property
    def phi1(self) -> Dict[int, CrossedElement]:
        return {E[0]: v for (gw, E), v in self.values.items() if not gw and len(E) == 1}

    @property
    def on_gg(self) -> Dict[Tuple[int, int], CrossedElement]:
        return {gw: v for (gw, E), v in self.values.items() if len(gw) == 2}

    @property
    def on_gv(self) -> Dict[Tuple[int, int], CrossedElement]:
        return {(gw[0], E[0]): v for (gw, E), v in self.values.items() if len(gw) == 1 and len(E) == 1}

    @property
    def on_vv(self) -> Dict[Tuple[int, int], CrossedElement]:
        return {E: v for (gw, E), v in self.values.items() if len(E) == 2}

    def to_dict(self) -> dict:
        G = self.ctx.group
        out = {}
        for (gw, E), v in sorted(self.values.items()):
            key = "(" + ", ".join([G.label(g) for g in gw] + [f"x{i + 1}" for i in E]) + ")"
            out[key] = format_element(v)
        return out


def cochain1(ctx: AlgebraContext, phi0: Dict[int, CrossedElement], phi1: Dict[int, CrossedElement]) -> Cochain:
    vals = {((g,), ()): v for g, v in phi0.items() if g != ctx.group.identity}
    vals.update({((), (i,)): v for i, v in phi1.items()})
    return Cochain(ctx, 1, vals)


def slots(ctx: AlgebraContext, degree: int) -> List[Slot]:
    out = []
    for r in range(min(degree, ctx.n) + 1):
        out.extend(x_basis(ctx, r, degree - r))
    return out


def cochain_differential(c: Cochain) -> Cochain:
    """Total differential d0-bar + d1-bar from the explicit formulas."""
    ctx = c.ctx
    G, f = ctx.group, ctx.cocycle
    p = c.degree + 1
    vals: Dict[Slot, CrossedElement] = {}
    for gw, E in slots(ctx, p):
        s, r = len(gw), len(E)
        acc = ctx.zero()
        if r >= 1:
            gprod = G.product(*gw) if gw else G.identity
            for i in range(r):
                rest = E[:i] + E[i + 1:]
                phi = c(gw, rest)
                if phi.is_zero():
                    continue
                v = ctx.var(E[i])
                gv = ctx.poly(ctx.act(gprod, Poly.var(ctx.field, ctx.n, E[i])))
                # 1-based position i + 1
                sgn_right = -1 if (s + i) % 2 else 1
                sgn_left = -sgn_right
                acc = acc + (phi * v).scale(sgn_right) + (gv * phi).scale(sgn_left)
        if s >= 1:
            acc = acc + ctx.w(gw[0]) * c(gw[1:], E)
            for i in range(s - 1):
                gg = G.m(gw[i], gw[i + 1])
                if gg == G.identity:
                    continue
                sign = -1 if (i + 1) % 2 else 1
                acc = acc + c(gw[:i] + (gg,) + gw[i + 2:], E).scale(sign * f(gw[i], gw[i + 1]))
            last = gw[-1]
            sign = -1 if s % 2 else 1
            acc = acc + (c.on_ext(gw[:-1], _wedge_images(ctx, last, E)) * ctx.w(last)).scale(sign)
        if not acc.is_zero():
            vals[(gw, E)] = acc
    return Cochain(ctx, p, vals)


def cochain_differential_via_resolution(c: Cochain) -> Cochain:
    """phi o d on basis elements: an independent path through the X-complex."""
    ctx = c.ctx
    vals = {}
    for gw, E in slots(ctx, c.degree + 1):
        dx = x_diff(XElement.basis(ctx, gw, E))
        acc = ctx.zero()
        for (am, ag, g2, E2, bm, bg), k in dx.terms.items():
            v = c(g2, E2)
            if v.is_zero():
                continue
            acc = acc + (ctx.monomial(am, ag) * v * ctx.monomial(bm, bg)).scale(k)
        if not acc.is_zero():
            vals[(gw, E)] = acc
    return Cochain(ctx, c.degree + 1, vals)


BarCochain = Callable[[CrossedElement, CrossedElement], CrossedElement]


def theta_bar(ctx: AlgebraContext, phi: BarCochain, degree: int = 2) -> Cochain:
    """Pull a normalized bar 2-cochain back along theta."""
    if degree != 2:
        raise ValueError("only 2-cochains are pulled back")
    vals = {}
    cache: Dict[Tuple, CrossedElement] = {}
    for gw, E in slots(ctx, degree):
        th: BarElement = theta_closed(ctx, gw, E)
        acc = ctx.zero()
        for (k0, mids, kl), c in th.terms.items():
            key = mids
            if key not in cache:
                cache[key] = phi(ctx.monomial(*mids[0]), ctx.monomial(*mids[1]))
            v = cache[key]
            if v.is_zero():
                continue
            acc = acc + (ctx.monomial(*k0) * v * ctx.monomial(*kl)).scale(c)
        if not acc.is_zero():
            vals[(gw, E)] = acc
    return Cochain(ctx, degree, vals)


def theta_bar_of_infinitesimal(st: HqStructure) -> Cochain:
    return theta_bar(st.ctx, lambda a, b: infinitesimal(st, a, b))


def expected_vv(st: HqStructure) -> CrossedElement:
    """sum_{j,h} chi_alpha^-1(g1j) f(g1j, g2h) alpha^-1(P1) g1j(P2) w_{g1j g2h}."""
    ctx = st.ctx
    out = ctx.zero()
    for g, P in rhs_components(st).items():
        out = out + ctx.poly(P, g)
    return out


def rhs_components(st: HqStructure) -> Dict[int, Poly]:
    ctx = st.ctx
    G, f = ctx.group, ctx.cocycle
    acc: Dict[int, Poly] = {}
    for g1, P1 in st.delta1_data:
        a1 = st.apply_automorphism(ALPHA_INV, ctx.poly(P1)).component(G.identity)
        for g2, P2 in st.delta2_data:
            D = f(g1, g2) / st.chi_alpha(g1)
            term = (a1 * ctx.act(g1, P2)).scale(D)
            g = G.m(g1, g2)
            acc[g] = acc[g] + term if g in acc else term
    return {g: P for g, P in acc.items() if not P.is_zero()}


def vv_value(c: Cochain, i: int, j: int) -> CrossedElement:
    """Value on xbar_i xbar_j with the antisymmetry sign applied."""
    if i == j:
        return c.ctx.zero()
    if i < j:
        return c((), (i, j))
    return c((), (j, i)).scale(-1)


def cocycle_check(st: HqStructure, phi: Optional[BarCochain] = None, samples: int = 100, seed: int = 7,
                  max_degree: int = 2) -> Report:
    rep = Report("cocycle")
    ctx = st.ctx
    phi = phi or (lambda a, b: infinitesimal(st, a, b))
    tb = theta_bar(ctx, phi)
    d = cochain_differential(tb)
    wit = None
    if not d.is_zero():
        (gw, E), v = next(iter(sorted(d.values.items())))
        G = ctx.group
        wit = {"input": [G.label(g) for g in gw] + [f"x{i + 1}" for i in E], "value": format_element(v)}
    rep.add("coh.total_differential", wit is None, wit, detail="every degree-3 basis input")
    rng = random.Random(seed)
    wit = None
    for k in range(samples):
        a, b, c = (random_element(ctx, rng, max_degree=max_degree, max_support=2) for _ in range(3))
        v = bar_coboundary(st, a, b, c, phi)
        if not v.is_zero():
            wit = {"a": format_element(a), "b": format_element(b), "c": format_element(c), "value": format_element(v)}
            break
    rep.add("coh.bar_cocycle", wit is None, wit, detail=f"{samples} random triples, seed {seed}")
    return rep


@dataclass
class CoboundaryResult:
    outcome: SolveOutcome
    unknowns: List[Tuple[Slot, int, Tuple[int, ...]]]
    rows: List[Dict[int, object]]
    rhs: List[object]
    row_labels: List[Tuple[Slot, int, Tuple[int, ...]]]
    verified: bool
    degree_bound: int

    @property
    def feasible(self) -> bool:
        return self.outcome.feasible

    def witness(self, ctx: AlgebraContext) -> Optional[Cochain]:
        if not self.outcome.feasible:
            return None
        vals: Dict[Slot, CrossedElement] = {}
        for idx, val in self.outcome.solution.items():
            slot, g, m = self.unknowns[idx]
            e = ctx.monomial(m, g, val)
            vals[slot] = vals[slot] + e if slot in vals else e
        return Cochain(ctx, 1, vals)

    def summary(self, ctx: AlgebraContext) -> dict:
        out = {"status": "feasible" if self.feasible else "infeasible", "degree_bound": self.degree_bound,
               "unknowns": len(self.unknowns), "equations": len(self.rows), "rank": self.outcome.rank,
               "verified": self.verified}
        if self.feasible:
            out["witness"] = self.witness(ctx).to_dict()
        else:
            cert = self.outcome.certificate
            out["certificate_size"] = len(cert)
            G = ctx.group
            lab = []
            for i in sorted(cert)[:5]:
                (gw, E), g, m = self.row_labels[i]
                lab.append({"input": [G.label(x) for x in gw] + [f"x{j + 1}" for j in E], "component": G.label(g),
                            "monomial": list(m), "weight": ctx.field.format(cert[i])})
            out["certificate_rows"] = lab
        return out


def coboundary_solve(st: HqStructure, D: int, target: Optional[Cochain] = None) -> CoboundaryResult:
    """Search for a 1-cochain with polynomial degree <= D whose differential is the target."""
    ctx = st.ctx
    G, fld = ctx.group, ctx.field
    target = target if target is not None else theta_bar_of_infinitesimal(st)
    monos = monomials_up_to(ctx.n, D)
    unknowns = []
    for slot in slots(ctx, 1):
        for g in G.elements:
            for m in monos:
                unknowns.append((slot, g, m))
    row_index: Dict[Tuple[Slot, int, Tuple[int, ...]], int] = {}
    rows: List[Dict[int, object]] = []
    labels = []

    def row_for(label):
        i = row_index.get(label)
        if i is None:
            i = len(rows)
            row_index[label] = i
            rows.append({})
            labels.append(label)
        return i

    for col, (slot, g, m) in enumerate(unknowns):
        u = Cochain(ctx, 1, {slot: ctx.monomial(m, g)})
        du = cochain_differential(u)
        for s2, v in du.values.items():
            for h, P in v.comps.items():
                for mm, c in P.terms.items():
                    rows[row_for((s2, h, mm))][col] = c
    for s2, v in target.values.items():
        for h, P in v.comps.items():
            for mm in P.terms:
                row_for((s2, h, mm))
    rhs = []
    for (s2, h, mm) in labels:
        rhs.append(target(*s2).component(h).coefficient(mm))
    outcome = solve_sparse(fld, rows, rhs)
    if outcome.feasible:
        verified = check_solution(fld, rows, rhs, outcome.solution)
    else:
        verified = check_certificate(fld, rows, rhs, outcome.certificate)
    return CoboundaryResult(outcome, unknowns, rows, rhs, labels, verified, D)


def direct_obstruction_check(st: HqStructure) -> Report:
    """Degree-free obstruction: RHS of the vv equation avoids x1, x2 while every LHS term is divisible by one."""
    rep = Report("direct-obstruction")
    ctx = st.ctx
    G = ctx.group
    comps = rhs_components(st)
    rhs_txt = {G.label(g): format_poly(P) for g, P in sorted(comps.items())}
    rep.add("obstruction.rhs_nonzero", bool(comps), None if comps else {"rhs": rhs_txt})
    bad = None
    for g, P in sorted(comps.items()):
        for m in P.terms:
            if m[st.x1] or m[st.x2]:
                bad = {"component": G.label(g), "reason": f"RHS support touches x{(st.x1 if m[st.x1] else st.x2) + 1}"}
                break
        if bad:
            break
    rep.add("obstruction.rhs_support", bad is None, bad)
    q = st.q
    bad = None
    ups = sorted({G.m(g1, g2) for g1, _ in st.delta1_data for g2, _ in st.delta2_data})
    for g in ups:
        M = ctx.rep(g)
        want1 = [q if i == st.x1 else 0 for i in range(ctx.n)]
        want2 = [1 / q if i == st.x2 else 0 for i in range(ctx.n)]
        if M.column(st.x1) != want1 or M.column(st.x2) != want2:
            bad = {"g": G.label(g), "reason": "x1, x2 are not eigenvectors with eigenvalues q, 1/q"}
            break
    rep.add("obstruction.eigen", bad is None, bad)
    rep.rhs = rhs_txt
    return rep


def theta_shape_check(st: HqStructure, tb: Optional[Cochain] = None) -> Report:
    """theta-bar(Phi) is zero on (g,h) and (g,v) inputs and equals the closed formula on (x1bar, x2bar)."""
    rep = Report("theta-bar")
    ctx = st.ctx
    G = ctx.group
    tb = tb if tb is not None else theta_bar_of_infinitesimal(st)
    for cid, part, fmt in (("theta.gg_zero", tb.on_gg, lambda k: [G.label(k[0]), G.label(k[1])]),
                           ("theta.gv_zero", tb.on_gv, lambda k: [G.label(k[0]), f"x{k[1] + 1}"])):
        wit = None
        if part:
            k, v = next(iter(sorted(part.items())))
            wit = {"input": fmt(k), "value": format_element(v)}
        rep.add(cid, wit is None, wit)
    got = vv_value(tb, st.x1, st.x2)
    want = expected_vv(st)
    rep.add("theta.vv_formula", got == want, {"got": format_element(got), "want": format_element(want)})
    return rep


def nontriviality_verdict(st: HqStructure, D: int = 4, samples: int = 100, seed: int = 7) -> dict:
    ctx = st.ctx
    coc = cocycle_check(st, samples=samples, seed=seed)
    tb = theta_bar_of_infinitesimal(st)
    shape = theta_shape_check(st, tb)
    cob = coboundary_solve(st, D, tb)
    obs = direct_obstruction_check(st)
    applies = obs.ok
    obstruction = {"status": "applies" if applies else "not-applicable", "rhs": obs.rhs}
    if not applies:
        first = obs.get(obs.failed_ids()[0])
        obstruction["reason"] = (first.witness or {}).get("reason", first.id)
    consistent = not (applies and cob.feasible)
    if not coc.ok:
        verdict, basis = "not-a-cocycle", None
    elif not cob.feasible:
        verdict, basis = "nontrivial", "proof" if applies else "evidence"
    else:
        verdict, basis = "coboundary-at-bound", "witness"
    ok = coc.ok and shape.ok and consistent and cob.verified
    return {
        "status": "pass" if ok else "fail",
        "verdict": verdict,
        "basis": basis,
        "exact": True,
        "consistent": consistent,
        "cocycle_ok": coc.ok,
        "cocycle": coc.to_dict(),
        "theta_bar": shape.to_dict(),
        "coboundary": cob.summary(ctx),
        "direct_obstruction": obstruction,
        "theta_bar_phi": tb.to_dict(),
        "seed": seed,
        "samples": samples,
    }
