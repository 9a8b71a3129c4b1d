"""Sparse commutative polynomials in x1..xn, linear substitutions and the
group action on them."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .reports import Report
from .scalars import FieldSpec, Scalar

Monomial = Tuple[int, ...]


class PolyError(ValueError):
    pass


def mono_key(m: Monomial):
    """Graded lexicographic, largest first."""
    return (-sum(m), tuple(-e for e in m))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def monomials_up_to(n: int, degree: int) -> List[Monomial]:
    """All exponent vectors of total degree <= degree, graded-lex order."""
    out: List[Monomial] = []
    for d in range(degree + 1):
        _exact(n, d, [], out)
    return sorted(out, key=mono_key)


def _exact(n: int, d: int, prefix: list, out: list) -> None:
    if n == 0:
        if d == 0:
            out.append(())
        return
    if len(prefix) == n - 1:
        out.append(tuple(prefix + [d]))
        return
    for e in range(d, -1, -1):
        _exact(n, d - e, prefix + [e], out)


class Poly:
    """Element of k[x1..xn]; immutable by convention."""

    __slots__ = ("field", "n", "terms")

    def __init__(self, fld: FieldSpec, n: int, terms: Optional[Dict[Monomial, Scalar]] = None, _clean: bool = False):
        self.field = fld
        self.n = n
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = terms
        else:
            self.terms = {m: c for m, c in terms.items() if c != 0}

    # constructors
    @classmethod
    def zero(cls, fld: FieldSpec, n: int) -> "Poly":
        return cls(fld, n, {}, True)

    @classmethod
    def constant(cls, fld: FieldSpec, n: int, c) -> "Poly":
        c = fld(c)
        return cls(fld, n, {(0,) * n: c} if c != 0 else {}, True)

    @classmethod
    def var(cls, fld: FieldSpec, n: int, i: int) -> "Poly":
        """The variable x_{i+1} (0-based index)."""
        if not 0 <= i < n:
            raise PolyError(f"variable index {i} out of range for n={n}")
        m = [0] * n
        m[i] = 1
        return cls(fld, n, {tuple(m): fld.one}, True)

    @classmethod
    def monomial(cls, fld: FieldSpec, m: Monomial, c=1) -> "Poly":
        c = fld(c)
        return cls(fld, len(m), {tuple(m): c} if c != 0 else {}, True)

    def _check(self, other: "Poly") -> None:
        if self.n != other.n or self.field != other.field:
            raise PolyError("polynomials live in different rings")

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.constant(self.field, self.n, other)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int,)) or hasattr(other, "numerator") or hasattr(other, "p"):
            return self.terms == Poly.constant(self.field, self.n, other).terms
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items(), key=lambda t: mono_key(t[0]))))

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v == 0:
                    del out[m]
                else:
                    out[m] = v
        return Poly(self.field, self.n, out, True)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, self.n, {m: -c for m, c in self.terms.items()}, True)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "Poly":
        if isinstance(c, str):
            c = self.field(c)
        if c == 0:
            return Poly.zero(self.field, self.n)
        return Poly(self.field, self.n, {m: v * c for m, v in self.terms.items()}, True)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        if not self.terms or not other.terms:
            return Poly.zero(self.field, self.n)
        out: Dict[Monomial, Scalar] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = out.get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        return Poly(self.field, self.n, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise PolyError("negative power of a polynomial")
        out = Poly.constant(self.field, self.n, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def var_degrees(self) -> Tuple[int, ...]:
        if not self.terms:
            return (0,) * self.n
        return tuple(max(m[i] for m in self.terms) for i in range(self.n))

    def sorted_terms(self) -> List[Tuple[Monomial, Scalar]]:
        return sorted(self.terms.items(), key=lambda t: mono_key(t[0]))

    def coefficient(self, m: Monomial) -> Scalar:
        return self.terms.get(tuple(m), self.field.zero)

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    def uses_only(self, allowed: Iterable[int]) -> bool:
        allowed = set(allowed)
        return all(all(e == 0 or i in allowed for i, e in enumerate(m)) for m in self.terms)

    def __repr__(self):
        return f"Poly({format_poly(self)})"


def format_poly(P: Poly) -> str:
    """Text form such as ``3*x1^2*x3 - x2``; parses back with the element grammar."""
    if not P.terms:
        return "0"
    pieces = []
    for m, c in P.sorted_terms():
        if P.field.is_rational:
            neg = c < 0
            a = -c if neg else c
            cs = P.field.format(a)
        else:
            neg = False
            cs = str(c.v)
        vars_ = [f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}" for i, e in enumerate(m) if e]
        if not vars_:
            body = cs
        elif cs == "1":
            body = "*".join(vars_)
        else:
            body = cs + "*" + "*".join(vars_)
        pieces.append(("-" if neg else "+", body))
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


class LinearEndo:
    """Linear map of V = k^n; ``matrix[i][j]`` is the x_i coefficient of the image of x_j."""

    __slots__ = ("field", "matrix", "_images", "_cache")

    def __init__(self, fld: FieldSpec, matrix: Sequence[Sequence]):
        self.field = fld
        self.matrix = tuple(tuple(fld(x) for x in row) for row in matrix)
        n = len(self.matrix)
        if any(len(r) != n for r in self.matrix):
            raise PolyError("linear endomorphisms must be square")
        self._images = None
        self._cache: Dict[Monomial, Poly] = {}

    @classmethod
    def identity(cls, fld: FieldSpec, n: int) -> "LinearEndo":
        return cls(fld, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, fld: FieldSpec, diag: Sequence) -> "LinearEndo":
        n = len(diag)
        return cls(fld, [[diag[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def n(self) -> int:
        return len(self.matrix)

    def __eq__(self, other):
        return isinstance(other, LinearEndo) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __matmul__(self, other: "LinearEndo") -> "LinearEndo":
        n = self.n
        zero = self.field.zero
        return LinearEndo(self.field, [[sum((self.matrix[i][k] * other.matrix[k][j] for k in range(n)), zero)
                                        for j in range(n)] for i in range(n)])

    def column(self, j: int) -> List[Scalar]:
        return [self.matrix[i][j] for i in range(self.n)]

    def image(self, j: int) -> Poly:
        """The linear form that x_j is sent to."""
        if self._images is None:
            n = self.n
            ims = []
            for jj in range(n):
                terms = {}
                for i in range(n):
                    c = self.matrix[i][jj]
                    if c != 0:
                        m = [0] * n
                        m[i] = 1
                        terms[tuple(m)] = c
                ims.append(Poly(self.field, n, terms, True))
            self._images = ims
        return self._images[j]

    def det(self) -> Scalar:
        n = self.n
        a = [list(r) for r in self.matrix]
        det = self.field.one
        for c in range(n):
            p = next((r for r in range(c, n) if a[r][c] != 0), None)
            if p is None:
                return self.field.zero
            if p != c:
                a[c], a[p] = a[p], a[c]
                det = -det
            det = det * a[c][c]
            inv = self.field.inv(a[c][c])
            for r in range(c + 1, n):
                if a[r][c] != 0:
                    fct = a[r][c] * inv
                    a[r] = [x - fct * y for x, y in zip(a[r], a[c])]
        return det

    def inverse(self) -> "LinearEndo":
        n = self.n
        fld = self.field
        a = [list(r) + [fld.one if i == j else fld.zero for j in range(n)] for i, r in enumerate(self.matrix)]
        for c in range(n):
            p = next((r for r in range(c, n) if a[r][c] != 0), None)
            if p is None:
                raise PolyError("linear map is not invertible")
            a[c], a[p] = a[p], a[c]
            inv = fld.inv(a[c][c])
            a[c] = [x * inv for x in a[c]]
            for r in range(n):
                if r != c and a[r][c] != 0:
                    fct = a[r][c]
                    a[r] = [x - fct * y for x, y in zip(a[r], a[c])]
        return LinearEndo(fld, [row[n:] for row in a])

    def apply_monomial(self, m: Monomial) -> Poly:
        P = self._cache.get(m)
        if P is None:
            n = self.n
            P = Poly.constant(self.field, n, 1)
            for j, e in enumerate(m):
                if e:
                    P = P * (self.image(j) ** e)
            self._cache[m] = P
        return P

    def __repr__(self):
        return f"LinearEndo({[[self.field.format(x) for x in r] for r in self.matrix]})"


def substitute(M: LinearEndo, P: Poly) -> Poly:
    """Replace each x_j by the j-th column's linear form."""
    acc: Dict[Monomial, Scalar] = {}
    for m, c in P.terms.items():
        for m2, c2 in M.apply_monomial(m).terms.items():
            v = acc.get(m2)
            acc[m2] = c * c2 if v is None else v + c * c2
    return Poly(P.field, P.n, acc)


@dataclass(frozen=True)
class Representation:
    maps: Tuple[LinearEndo, ...]

    def __call__(self, g: int) -> LinearEndo:
        return self.maps[g]

    @property
    def n(self) -> int:
        return self.maps[0].n


def representation_from_generators(G, fld: FieldSpec, n: int, gen_mats: Dict[str, Sequence]) -> Representation:
    """Extend generator matrices along words; validation is separate."""
    gens = G.generator_map()
    mats: Dict[int, LinearEndo] = {G.identity: LinearEndo.identity(fld, n)}
    names = sorted(gen_mats)
    gm = {}
    for name in names:
        if name not in gens:
            raise PolyError(f"unknown generator label {name!r}")
        gm[name] = LinearEndo(fld, gen_mats[name])
        if gm[name].n != n:
            raise PolyError(f"matrix for {name!r} is not {n}x{n}")
    frontier = [G.identity]
    while frontier:
        nxt = []
        for g in frontier:
            for name in names:
                h = G.m(g, gens[name])
                if h not in mats:
                    mats[h] = mats[g] @ gm[name]
                    nxt.append(h)
        frontier = nxt
    for g in G.elements:
        if g not in mats:
            raise PolyError("generator matrices do not reach every element; list every generator")
    return Representation(tuple(mats[g] for g in G.elements))


def trivial_representation(G, fld: FieldSpec, n: int) -> Representation:
    I = LinearEndo.identity(fld, n)
    return Representation(tuple(I for _ in G.elements))


def group_act(g: int, P: Poly, rho: Representation) -> Poly:
    return substitute(rho(g), P)


def validate_representation(G, rho: Representation) -> Report:
    rep = Report("representation")
    n = rho.n
    e = G.identity
    ok_id = rho(e) == LinearEndo.identity(rho(e).field, n)
    rep.add("rep.identity", ok_id, None if ok_id else G.label(e))
    wit = None
    for g in G.elements:
        for h in G.elements:
            if rho(G.m(g, h)) != rho(g) @ rho(h):
                wit = [G.label(g), G.label(h)]
                break
        if wit:
            break
    rep.add("rep.hom", wit is None, wit)
    return rep
