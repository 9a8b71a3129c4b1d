"""Finite groups by Cayley table, normal 2-cocycles and characters."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .reports import Check, Report
from .scalars import FieldSpec, Scalar


class GroupError(ValueError):
    pass


@dataclass(frozen=True)
class GroupData:
    """A finite group given by its full multiplication table.

    ``generators`` maps generator labels (used by the word grammar) to
    element indices.  Element labels are themselves valid words.
    """

    mul: Tuple[Tuple[int, ...], ...]
    identity: int
    inv: Tuple[int, ...]
    labels: Tuple[str, ...]
    generators: Tuple[Tuple[str, int], ...] = ()
    name: str = ""

    @property
    def size(self) -> int:
        return len(self.mul)

    @property
    def elements(self) -> range:
        return range(len(self.mul))

    @property
    def non_identity(self) -> List[int]:
        return [g for g in self.elements if g != self.identity]

    def m(self, g: int, h: int) -> int:
        return self.mul[g][h]

    def product(self, *gs: int) -> int:
        out = self.identity
        for g in gs:
            out = self.mul[out][g]
        return out

    def power(self, g: int, e: int) -> int:
        if e < 0:
            g, e = self.inv[g], -e
        out = self.identity
        for _ in range(e):
            out = self.mul[out][g]
        return out

    def conj(self, g: int, h: int) -> int:
        """g h g^-1."""
        return self.mul[self.mul[g][h]][self.inv[g]]

    def label(self, g: int) -> str:
        return self.labels[g]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            return self.parse_word(label)

    def generator_map(self) -> Dict[str, int]:
        return dict(self.generators)

    def parse_word(self, word: str) -> int:
        """Evaluate a word such as ``t*t^2*s`` or ``e``."""
        gens = self.generator_map()
        w = word.strip()
        if not w:
            raise GroupError("empty group word")
        out = self.identity
        for tok in w.split("*"):
            tok = tok.strip()
            m = re.fullmatch(r"([A-Za-z_][A-Za-z_0-9]*)(?:\^(-?\d+))?", tok)
            if not m:
                raise GroupError(f"malformed group word {word!r}")
            name, exp = m.group(1), int(m.group(2)) if m.group(2) else 1
            if name in ("e", "1"):
                g = self.identity
            elif name in gens:
                g = gens[name]
            elif name in self.labels:
                g = self.labels.index(name)
            else:
                raise GroupError(f"unknown generator label {name!r}")
            out = self.mul[out][self.power(g, exp)]
        return out

    def is_abelian(self) -> bool:
        return all(self.mul[g][h] == self.mul[h][g] for g in self.elements for h in self.elements)


def _validate_table(mul, identity, inv) -> None:
    n = len(mul)
    for g in range(n):
        if mul[identity][g] != g or mul[g][identity] != g:
            raise GroupError(f"element {identity} is not a two-sided identity")
        if mul[g][inv[g]] != identity or mul[inv[g]][g] != identity:
            raise GroupError(f"inverse table wrong at {g}")
    for a in range(n):
        for b in range(n):
            ab = mul[a][b]
            for c in range(n):
                if mul[ab][c] != mul[a][mul[b][c]]:
                    raise GroupError(f"table is not associative at {(a, b, c)}")


def from_table(table: Sequence[Sequence[int]], labels: Optional[Sequence[str]] = None,
               generators: Optional[Dict[str, int]] = None, name: str = "table") -> GroupData:
    n = len(table)
    mul = tuple(tuple(int(x) for x in row) for row in table)
    if any(len(r) != n for r in mul) or any(not 0 <= x < n for r in mul for x in r):
        raise GroupError("Cayley table must be square with entries in range")
    ids = [e for e in range(n) if all(mul[e][g] == g and mul[g][e] == g for g in range(n))]
    if not ids:
        raise GroupError("table has no identity element")
    e = ids[0]
    inv = []
    for g in range(n):
        cands = [h for h in range(n) if mul[g][h] == e]
        if len(cands) != 1:
            raise GroupError(f"element {g} has no unique inverse")
        inv.append(cands[0])
    _validate_table(mul, e, inv)
    labels = tuple(labels) if labels else tuple("e" if g == e else f"a{g}" for g in range(n))
    if len(set(labels)) != n:
        raise GroupError("element labels must be distinct")
    gens = tuple(sorted((generators or {}).items()))
    return GroupData(mul, e, tuple(inv), labels, gens, name)


def cyclic(r: int) -> GroupData:
    if r < 1:
        raise GroupError("cyclic group order must be positive")

    def lab(i):
        return "e" if i == 0 else ("g" if i == 1 else f"g^{i}")

    mul = tuple(tuple((a + b) % r for b in range(r)) for a in range(r))
    inv = tuple((-a) % r for a in range(r))
    gens = (("g", 1 % r),)
    return GroupData(mul, 0, inv, tuple(lab(i) for i in range(r)), gens, f"cyclic({r})")


def dihedral(u: int) -> GroupData:
    """<s, t | s^2, t^u, stst>, element t^i s^j stored at index i + u*j."""
    if u < 1:
        raise GroupError("dihedral parameter must be positive")

    def idx(i, j):
        return (i % u) + u * (j % 2)

    def lab(i, j):
        tp = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
        if j == 0:
            return tp or "e"
        return f"{tp}*s" if tp else "s"

    n = 2 * u
    mul = [[0] * n for _ in range(n)]
    for a in range(u):
        for b in range(2):
            for c in range(u):
                for d in range(2):
                    # (t^a s^b)(t^c s^d) = t^(a + (-1)^b c) s^(b+d)
                    mul[idx(a, b)][idx(c, d)] = idx(a + (c if b == 0 else -c), b + d)
    mul = tuple(tuple(r) for r in mul)
    inv = []
    for g in range(n):
        inv.append(next(h for h in range(n) if mul[g][h] == 0))
    labels = tuple(lab(i % u, i // u) for i in range(n))
    gens = (("s", idx(0, 1)), ("t", idx(1 % u, 0)))
    G = GroupData(mul, 0, tuple(inv), labels, gens, f"dihedral({u})")
    return G


def make_group(desc: dict) -> GroupData:
    kind = desc.get("kind")
    if kind == "cyclic":
        return cyclic(int(desc["r"]))
    if kind == "dihedral":
        return dihedral(int(desc["u"]))
    if kind == "table":
        return from_table(desc["table"], desc.get("labels"), desc.get("generators"))
    raise GroupError(f"unknown group kind {kind!r}")


def conjugacy_classes(G: GroupData) -> List[List[int]]:
    seen = set()
    classes = []
    for g in G.elements:
        if g in seen:
            continue
        cls = sorted({G.conj(h, g) for h in G.elements})
        seen.update(cls)
        classes.append(cls)
    return classes


def is_union_of_classes(G: GroupData, subset) -> Optional[Tuple[int, int]]:
    """None if closed under conjugation, else a witness (h, g)."""
    s = set(subset)
    for g in sorted(s):
        for h in G.elements:
            if G.conj(h, g) not in s:
                return (h, g)
    return None


@dataclass(frozen=True)
class Cocycle:
    table: Tuple[Tuple[Scalar, ...], ...]

    def __call__(self, g: int, h: int) -> Scalar:
        return self.table[g][h]

    def is_trivial(self) -> bool:
        return all(x == 1 for row in self.table for x in row)


def trivial_cocycle(G: GroupData, fld: FieldSpec) -> Cocycle:
    one = fld.one
    return Cocycle(tuple(tuple(one for _ in G.elements) for _ in G.elements))


def cocycle_xi(G: GroupData, fld: FieldSpec, xi, generator: Optional[int] = None) -> Cocycle:
    """f(g^u, g^v) = 1 if u + v < r else xi, for G cyclic of order r."""
    xi = fld(xi)
    if xi == 0:
        raise GroupError("xi must be nonzero")
    r = G.size
    gen = generator if generator is not None else G.generator_map().get("g", 1 % r)
    exps = {}
    for u in range(r):
        exps[G.power(gen, u)] = u
    if len(exps) != r:
        raise GroupError("cocycle_xi needs a cyclic group and a generator")
    one = fld.one
    tab = [[None] * r for _ in range(r)]
    for a, ua in exps.items():
        for b, ub in exps.items():
            tab[a][b] = one if ua + ub < r else xi
    return Cocycle(tuple(tuple(row) for row in tab))


def cocycle_from_table(G: GroupData, fld: FieldSpec, values: Dict[Tuple[int, int], Scalar]) -> Cocycle:
    one = fld.one
    tab = [[one for _ in G.elements] for _ in G.elements]
    for (g, h), v in values.items():
        tab[g][h] = fld(v)
    return Cocycle(tuple(tuple(r) for r in tab))


def validate_cocycle(G: GroupData, f: Cocycle, fld: Optional[FieldSpec] = None) -> Report:
    rep = Report("cocycle")
    e = G.identity
    bad = next(((e, g) for g in G.elements if f(e, g) != 1), None) or \
        next(((g, e) for g in G.elements if f(g, e) != 1), None)
    rep.add("cocycle.normal", bad is None, _lab(G, bad))
    zero = next(((g, h) for g in G.elements for h in G.elements if f(g, h) == 0), None)
    rep.add("cocycle.nonzero", zero is None, _lab(G, zero))
    wit = None
    for g in G.elements:
        for h in G.elements:
            gh = G.m(g, h)
            for k in G.elements:
                if f(g, h) * f(gh, k) != f(h, k) * f(g, G.m(h, k)):
                    wit = (g, h, k)
                    break
            if wit:
                break
        if wit:
            break
    rep.add("cocycle.identity", wit is None, _lab(G, wit))
    return rep


def _lab(G: GroupData, tup):
    if tup is None:
        return None
    return [G.label(x) for x in tup]


@dataclass(frozen=True)
class Character:
    values: Tuple[Scalar, ...]

    def __call__(self, g: int) -> Scalar:
        return self.values[g]

    def inverse(self, g: int) -> Scalar:
        return 1 / self.values[g]


def trivial_character(G: GroupData, fld: FieldSpec) -> Character:
    return Character(tuple(fld.one for _ in G.elements))


def character_from_generators(G: GroupData, fld: FieldSpec, gen_values: Dict[str, object]) -> Character:
    """Extend generator values along a breadth-first word spanning tree.

    The result is *not* validated here; call :func:`validate_character`.
    """
    gens = G.generator_map()
    vals: Dict[int, Scalar] = {G.identity: fld.one}
    frontier = [G.identity]
    order = sorted(gen_values)
    for name in order:
        if name not in gens:
            raise GroupError(f"unknown generator label {name!r}")
    while frontier:
        nxt = []
        for g in frontier:
            for name in order:
                h = G.m(g, gens[name])
                if h not in vals:
                    vals[h] = vals[g] * fld(gen_values[name])
                    nxt.append(h)
        frontier = nxt
    if len(vals) != G.size:
        raise GroupError("generator values do not reach every element")
    return Character(tuple(vals[g] for g in G.elements))


def character_from_values(G: GroupData, fld: FieldSpec, values: Dict[str, object]) -> Character:
    vals = [fld.one for _ in G.elements]
    for lab, v in values.items():
        vals[G.index(lab)] = fld(v)
    return Character(tuple(vals))


def validate_character(G: GroupData, chi: Character, name: str = "character") -> Check:
    if chi(G.identity) != 1:
        return Check(f"{name}.hom", False, {"at": [G.label(G.identity)]})
    for g in G.elements:
        if chi(g) == 0:
            return Check(f"{name}.hom", False, {"zero_at": G.label(g)})
        for h in G.elements:
            if chi(G.m(g, h)) != chi(g) * chi(h):
                return Check(f"{name}.hom", False, {"pair": [G.label(g), G.label(h)]})
    return Check(f"{name}.hom", True)
