"""The Hopf algebra H_q on sigma^{+-1}, D1, D2 in PBW form.

Basis elements are triples (i, j, k) meaning sigma^i D1^j D2^k.  The only
commutation rule needed is D_a sigma = q sigma D_a, which gives

    (i1, j1, k1)(i2, j2, k2) = q^(i2 (j1 + k1)) (i1 + i2, j1 + j2, k1 + k2).

When q is a primitive l-th root of unity (l >= 2) the D-exponents are
truncated at l.  Tensor powers use the componentwise product since the
braid of H_q is the flip.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .reports import Report
from .scalars import FieldSpec, QParam, Scalar, qfactorial

Idx = Tuple[int, int, int]
Terms = Dict[Idx, Scalar]
Tensor = Dict[Tuple[Idx, ...], Scalar]

ONE: Idx = (0, 0, 0)
SIGMA: Idx = (1, 0, 0)
SIGMA_INV: Idx = (-1, 0, 0)
D1: Idx = (0, 1, 0)
D2: Idx = (0, 0, 1)

GENERATORS = {"sigma": SIGMA, "sigma_inv": SIGMA_INV, "D1": D1, "D2": D2}


class HopfError(ValueError):
    pass


def _acc(out: dict, key, val) -> None:
    v = out.get(key)
    v = val if v is None else v + val
    if v == 0:
        out.pop(key, None)
    else:
        out[key] = v


def _clean(d: dict) -> dict:
    return {k: v for k, v in d.items() if v != 0}


class Hq:
    """H_q over a field, optionally with perturbed structure constants.

    ``overrides`` may replace generator data, for negative testing:
    ``coproduct`` {name: tensor terms}, ``counit`` {name: scalar},
    ``antipode`` {name: element terms}, ``commutation`` (scalar used in
    place of q in the PBW rule).
    """

    def __init__(self, q: QParam, fld: FieldSpec, overrides: Optional[dict] = None):
        self.q = q
        self.field = fld
        ov = overrides or {}
        self.comm = fld(ov.get("commutation", q.value))
        self.l = q.truncation
        one = fld.one
        self.gen_coproduct: Dict[str, Tensor] = {
            "sigma": {(SIGMA, SIGMA): one},
            "sigma_inv": {(SIGMA_INV, SIGMA_INV): one},
            "D1": {(D1, SIGMA): one, (ONE, D1): one},
            "D2": {(D2, ONE): one, (SIGMA, D2): one},
        }
        self.gen_counit: Dict[str, Scalar] = {"sigma": one, "sigma_inv": one, "D1": fld.zero, "D2": fld.zero}
        # S(D1) = -D1 sigma^-1 = -q^-1 sigma^-1 D1 ; S(D2) = -sigma^-1 D2
        self.gen_antipode: Dict[str, Terms] = {
            "sigma": {SIGMA_INV: one},
            "sigma_inv": {SIGMA: one},
            "D1": self.mul_terms({D1: -one}, {SIGMA_INV: one}),
            "D2": {(-1, 0, 1): -one},
        }
        for name, t in ov.get("coproduct", {}).items():
            self.gen_coproduct[name] = _clean({k: fld(v) for k, v in t.items()})
        for name, v in ov.get("counit", {}).items():
            self.gen_counit[name] = fld(v)
        for name, t in ov.get("antipode", {}).items():
            self.gen_antipode[name] = _clean({k: fld(v) for k, v in t.items()})
        self._cop: Dict[Idx, Tensor] = {}
        self._anti: Dict[Idx, Terms] = {}

    # algebra
    def truncated(self, idx: Idx) -> bool:
        return self.l is not None and (idx[1] >= self.l or idx[2] >= self.l)

    def mul_idx(self, a: Idx, b: Idx) -> Tuple[Optional[Idx], Scalar]:
        out = (a[0] + b[0], a[1] + b[1], a[2] + b[2])
        if self.truncated(out):
            return None, self.field.zero
        return out, self.comm ** (b[0] * (a[1] + a[2]))

    def mul_terms(self, a: Terms, b: Terms) -> Terms:
        out: Terms = {}
        for ia, ca in a.items():
            for ib, cb in b.items():
                idx, c = self.mul_idx(ia, ib)
                if idx is not None:
                    _acc(out, idx, ca * cb * c)
        return out

    def element(self, terms: Terms) -> "HqElement":
        return HqElement(self, _clean({k: self.field(v) for k, v in terms.items()}))

    def basis(self, idx: Idx) -> "HqElement":
        return HqElement(self, {} if self.truncated(idx) else {idx: self.field.one})

    def basis_up_to(self, bound: int) -> List[Idx]:
        top = bound + 1 if self.l is None else min(bound + 1, self.l)
        return [(i, j, k) for i in range(-bound, bound + 1) for j in range(top) for k in range(top)]

    # tensors
    def tensor_mul(self, s: Tensor, t: Tensor) -> Tensor:
        out: Tensor = {}
        for ka, ca in s.items():
            for kb, cb in t.items():
                c = ca * cb
                key = []
                for x, y in zip(ka, kb):
                    idx, cc = self.mul_idx(x, y)
                    if idx is None:
                        c = None
                        break
                    c = c * cc
                    key.append(idx)
                if c is not None:
                    _acc(out, tuple(key), c)
        return out

    def tensor_pow(self, t: Tensor, e: int, arity: int) -> Tensor:
        out: Tensor = {(ONE,) * arity: self.field.one}
        for _ in range(e):
            out = self.tensor_mul(out, t)
        return out

    # structure maps
    def coproduct_idx(self, idx: Idx) -> Tensor:
        if idx in self._cop:
            return self._cop[idx]
        i, j, k = idx
        sig = self.gen_coproduct["sigma" if i >= 0 else "sigma_inv"]
        t = self.tensor_pow(sig, abs(i), 2)
        t = self.tensor_mul(t, self.tensor_pow(self.gen_coproduct["D1"], j, 2))
        t = self.tensor_mul(t, self.tensor_pow(self.gen_coproduct["D2"], k, 2))
        self._cop[idx] = t
        return t

    def coproduct_terms(self, a: Terms) -> Tensor:
        out: Tensor = {}
        for idx, c in a.items():
            for key, v in self.coproduct_idx(idx).items():
                _acc(out, key, c * v)
        return out

    def counit_idx(self, idx: Idx) -> Scalar:
        i, j, k = idx
        e = self.gen_counit["sigma" if i >= 0 else "sigma_inv"] ** abs(i)
        return e * self.gen_counit["D1"] ** j * self.gen_counit["D2"] ** k

    def counit_terms(self, a: Terms) -> Scalar:
        out = self.field.zero
        for idx, c in a.items():
            out = out + c * self.counit_idx(idx)
        return out

    def antipode_idx(self, idx: Idx) -> Terms:
        """Anti-multiplicative: S(sigma^i D1^j D2^k) = S(D2)^k S(D1)^j S(sigma)^i."""
        if idx in self._anti:
            return self._anti[idx]
        i, j, k = idx
        out: Terms = {ONE: self.field.one}
        for _ in range(k):
            out = self.mul_terms(out, self.gen_antipode["D2"])
        for _ in range(j):
            out = self.mul_terms(out, self.gen_antipode["D1"])
        s = self.gen_antipode["sigma" if i >= 0 else "sigma_inv"]
        for _ in range(abs(i)):
            out = self.mul_terms(out, s)
        self._anti[idx] = out
        return out

    def antipode_terms(self, a: Terms) -> Terms:
        out: Terms = {}
        for idx, c in a.items():
            for k2, v in self.antipode_idx(idx).items():
                _acc(out, k2, c * v)
        return out

    # maps on tensor legs
    def apply_coproduct_leg(self, t: Tensor, leg: int) -> Tensor:
        out: Tensor = {}
        for key, c in t.items():
            for k2, v in self.coproduct_idx(key[leg]).items():
                _acc(out, key[:leg] + k2 + key[leg + 1:], c * v)
        return out

    def apply_counit_leg(self, t: Tensor, leg: int) -> Tensor:
        out: Tensor = {}
        for key, c in t.items():
            e = self.counit_idx(key[leg])
            if e != 0:
                _acc(out, key[:leg] + key[leg + 1:], c * e)
        return out

    def multiply_legs(self, t: Tensor, antipode_leg: Optional[int] = None) -> Terms:
        out: Terms = {}
        for (a, b), c in t.items():
            left = self.antipode_idx(a) if antipode_leg == 0 else {a: self.field.one}
            right = self.antipode_idx(b) if antipode_leg == 1 else {b: self.field.one}
            for k, v in self.mul_terms(left, right).items():
                _acc(out, k, c * v)
        return out


@dataclass
class HqElement:
    hq: Hq
    terms: Terms

    def _same(self, other):
        if other.hq is not self.hq:
            raise HopfError("elements of different H_q instances")

    def __mul__(self, other: "HqElement") -> "HqElement":
        self._same(other)
        return HqElement(self.hq, self.hq.mul_terms(self.terms, other.terms))

    def __add__(self, other: "HqElement") -> "HqElement":
        self._same(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, v)
        return HqElement(self.hq, out)

    def __eq__(self, other):
        return isinstance(other, HqElement) and self.terms == other.terms

    def scale(self, c) -> "HqElement":
        return HqElement(self.hq, _clean({k: v * c for k, v in self.terms.items()}))


def hq_mul(a: HqElement, b: HqElement) -> HqElement:
    return a * b


def coproduct(a: HqElement) -> Tensor:
    return a.hq.coproduct_terms(a.terms)


def counit(a: HqElement) -> Scalar:
    return a.hq.counit_terms(a.terms)


def antipode(a: HqElement) -> HqElement:
    return HqElement(a.hq, a.hq.antipode_terms(a.terms))


def verify_hopf_axioms(hq: Hq, bound: int) -> Report:
    """Coassociativity, counit, antipode and multiplicativity on the PBW box."""
    rep = Report("hopf-axioms")
    one = hq.field.one
    basis = hq.basis_up_to(bound)
    gens = [g for g in GENERATORS.values() if not hq.truncated(g)]

    def first_failure(pred):
        for b in basis:
            if not pred(b):
                return list(b)
        return None

    def coassoc(b):
        d = hq.coproduct_idx(b)
        return hq.apply_coproduct_leg(d, 0) == hq.apply_coproduct_leg(d, 1)

    def counit_left(b):
        return hq.apply_counit_leg(hq.coproduct_idx(b), 0) == {(b,): one}

    def counit_right(b):
        return hq.apply_counit_leg(hq.coproduct_idx(b), 1) == {(b,): one}

    def unit_counit(b):
        e = hq.counit_idx(b)
        return {ONE: e} if e != 0 else {}

    def antipode_left(b):
        return hq.multiply_legs(hq.coproduct_idx(b), antipode_leg=0) == unit_counit(b)

    def antipode_right(b):
        return hq.multiply_legs(hq.coproduct_idx(b), antipode_leg=1) == unit_counit(b)

    def multiplicative(b):
        for x in gens:
            for left, right in ((x, b), (b, x)):
                prod = hq.mul_terms({left: one}, {right: one})
                if hq.coproduct_terms(prod) != hq.tensor_mul(hq.coproduct_idx(left), hq.coproduct_idx(right)):
                    return False
                if hq.counit_terms(prod) != hq.counit_idx(left) * hq.counit_idx(right):
                    return False
                if hq.antipode_terms(prod) != hq.mul_terms(hq.antipode_idx(right), hq.antipode_idx(left)):
                    return False
        return True

    for cid, pred in (("hopf.coassociativity", coassoc), ("hopf.counit_left", counit_left),
                      ("hopf.counit_right", counit_right), ("hopf.antipode_left", antipode_left),
                      ("hopf.antipode_right", antipode_right), ("hopf.multiplicative", multiplicative)):
        w = first_failure(pred)
        rep.add(cid, w is None, None if w is None else {"basis": w})
    return rep


class HqTensorSeries(list):
    """Coefficients F_0, F_1, ... as HqTensors."""


def expq_series(hq: Hq, N: int) -> HqTensorSeries:
    """exp_q(t D1 (x) D2): coefficient 1/(i)!_q D1^i (x) D2^i."""
    top = hq.l if hq.l is not None else N + 1
    out = HqTensorSeries()
    for i in range(top):
        fac = qfactorial(i, hq.q)
        if fac == 0:
            raise HopfError("truncation exceeds invertibility range")
        out.append({((0, i, 0), (0, 0, i)): hq.field.inv(fac)})
    return out


def verify_twisting(hq: Hq, N: int, F: Optional[List[Tensor]] = None, flip_bound: int = 1) -> Report:
    rep = Report("twisting")
    F = list(F) if F is not None else list(expq_series(hq, N))
    one = hq.field.one
    unit2 = {(ONE, ONE): one}

    # (1) counit conditions
    wit = None
    for i, Fi in enumerate(F):
        target = {(ONE,): one} if i == 0 else {}
        for leg in (0, 1):
            if hq.apply_counit_leg(Fi, leg) != target:
                wit = {"order": i, "leg": leg}
                break
        if wit:
            break
    if F and F[0] != unit2:
        wit = wit or {"order": 0, "reason": "F_0 != 1(x)1"}
    rep.add("udf.counit", wit is None, wit)

    # (2) order-by-order pentagon identity in H (x) H (x) H
    top = 2 * (len(F) - 1) if hq.l is not None else min(N, len(F) - 1)
    wit = None
    for n in range(top + 1):
        lhs: Tensor = {}
        rhs: Tensor = {}
        for i in range(n + 1):
            j = n - i
            if i >= len(F) or j >= len(F):
                continue
            Fi, Fj = F[i], F[j]
            Fj_1 = {k + (ONE,): v for k, v in Fj.items()}
            one_Fj = {(ONE,) + k: v for k, v in Fj.items()}
            for k, v in hq.tensor_mul(hq.apply_coproduct_leg(Fi, 0), Fj_1).items():
                _acc(lhs, k, v)
            for k, v in hq.tensor_mul(hq.apply_coproduct_leg(Fi, 1), one_Fj).items():
                _acc(rhs, k, v)
        if lhs != rhs:
            wit = {"order": n}
            break
    rep.add("udf.pentagon", wit is None, wit)

    # (3) (c (x) H)(H (x) c)(F_n (x) h) = h (x) F_n with c the flip
    def flip(t: Tensor, pos: int) -> Tensor:
        return {k[:pos] + (k[pos + 1], k[pos]) + k[pos + 2:]: v for k, v in t.items()}

    wit = None
    for n, Fn in enumerate(F):
        for h in hq.basis_up_to(flip_bound):
            t = {k + (h,): v for k, v in Fn.items()}
            lhs = flip(flip(t, 1), 0)
            if lhs != {(h,) + k: v for k, v in Fn.items()}:
                wit = {"order": n, "basis": list(h)}
                break
        if wit:
            break
    rep.add("udf.flip", wit is None, wit)
    return rep


def hopf_check(fld: FieldSpec, q, bound: int = 3, order: int = 6, overrides: Optional[dict] = None,
               F: Optional[List[Tensor]] = None) -> Report:
    qp = QParam.of(fld(q))
    hq = Hq(qp, fld, overrides)
    rep = Report("hopf-check")
    rep.extend(verify_hopf_axioms(hq, bound))
    rep.extend(verify_twisting(hq, order, F))
    return rep
