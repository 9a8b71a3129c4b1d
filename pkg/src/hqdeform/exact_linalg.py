"""Exact Gaussian elimination with infeasibility certificates.

Rows are eliminated one at a time against the pivots found so far (first
nonzero column wins).  Every reduced row remembers which original rows it
is a combination of, so an inconsistent row directly yields a vector y with
y^T A = 0 and y^T b != 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .scalars import FieldSpec, Scalar

SparseRow = Dict[int, Scalar]


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class Matrix:
    field: FieldSpec
    entries: tuple  # tuple of row tuples

    @classmethod
    def from_rows(cls, fld: FieldSpec, rows: Sequence[Sequence]) -> "Matrix":
        rows = tuple(tuple(fld(x) for x in r) for r in rows)
        if rows and len({len(r) for r in rows}) != 1:
            raise DimensionError("ragged matrix")
        return cls(fld, rows)

    @classmethod
    def identity(cls, fld: FieldSpec, n: int) -> "Matrix":
        return cls.from_rows(fld, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, fld: FieldSpec, rows: int, cols: int) -> "Matrix":
        return cls.from_rows(fld, [[0] * cols for _ in range(rows)])

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def transpose(self) -> "Matrix":
        return Matrix(self.field, tuple(zip(*self.entries)) if self.entries else ())

    def sparse_rows(self) -> List[SparseRow]:
        return [{j: x for j, x in enumerate(r) if x != 0} for r in self.entries]

    def __matmul__(self, vec: Sequence[Scalar]) -> List[Scalar]:
        if len(vec) != self.cols:
            raise DimensionError("matrix-vector size mismatch")
        zero = self.field.zero
        return [sum((a * x for a, x in zip(r, vec)), zero) for r in self.entries]


@dataclass
class SolveOutcome:
    """Either ``solution`` (dict column -> value, unset columns are 0) or a
    ``certificate`` (dict row -> coefficient)."""

    solution: Optional[Dict[int, Scalar]] = None
    certificate: Optional[Dict[int, Scalar]] = None
    rank: int = 0

    @property
    def feasible(self) -> bool:
        return self.certificate is None

    def solution_vector(self, ncols: int, zero) -> List[Scalar]:
        return [self.solution.get(j, zero) for j in range(ncols)]

    def certificate_vector(self, nrows: int, zero) -> List[Scalar]:
        return [self.certificate.get(i, zero) for i in range(nrows)]


@dataclass
class _Pivot:
    row: SparseRow
    rhs: Scalar
    combo: SparseRow = field(default_factory=dict)


def _axpy(target: SparseRow, coeff: Scalar, source: SparseRow) -> None:
    for k, v in source.items():
        nv = target.get(k, 0) + coeff * v
        if nv == 0:
            target.pop(k, None)
        else:
            target[k] = nv


class Eliminator:
    """Incremental row echelon form over a field."""

    def __init__(self, fld: FieldSpec, track: bool = True):
        self.field = fld
        self.track = track
        self.pivots: Dict[int, _Pivot] = {}
        self.certificate: Optional[SparseRow] = None
        self.n_rows = 0

    def add_row(self, row: SparseRow, rhs: Scalar) -> bool:
        """Insert a row; returns False once an inconsistency has been seen."""
        idx = self.n_rows
        self.n_rows += 1
        if self.certificate is not None:
            return False
        row = {k: v for k, v in row.items() if v != 0}
        combo = {idx: self.field.one} if self.track else {}
        while row:
            col = min(row)
            piv = self.pivots.get(col)
            if piv is None:
                inv = self.field.inv(row[col])
                row = {k: v * inv for k, v in row.items()}
                rhs = rhs * inv
                if self.track:
                    combo = {k: v * inv for k, v in combo.items()}
                self.pivots[col] = _Pivot(row, rhs, combo)
                return True
            c = -row[col]
            _axpy(row, c, piv.row)
            rhs = rhs + c * piv.rhs
            if self.track:
                _axpy(combo, c, piv.combo)
        if rhs != 0:
            # scale so the lowest-index entry is 1
            lead = combo[min(combo)]
            inv = self.field.inv(lead)
            self.certificate = {k: v * inv for k, v in combo.items()}
            return False
        return True

    def back_substitute(self) -> Dict[int, Scalar]:
        sol: Dict[int, Scalar] = {}
        for col in sorted(self.pivots, reverse=True):
            piv = self.pivots[col]
            val = piv.rhs
            for k, v in piv.row.items():
                if k != col and k in sol:
                    val = val - v * sol[k]
            if val != 0:
                sol[col] = val
        return sol


def solve_sparse(fld: FieldSpec, rows: Sequence[SparseRow], rhs: Sequence[Scalar]) -> SolveOutcome:
    if len(rows) != len(rhs):
        raise DimensionError("right-hand side length differs from row count")
    el = Eliminator(fld)
    for r, b in zip(rows, rhs):
        if not el.add_row(r, fld(b)):
            return SolveOutcome(certificate=el.certificate, rank=len(el.pivots))
    return SolveOutcome(solution=el.back_substitute(), rank=len(el.pivots))


def solve(A: Matrix, b: Sequence) -> SolveOutcome:
    if len(b) != A.rows:
        raise DimensionError(f"b has length {len(b)}, A has {A.rows} rows")
    return solve_sparse(A.field, A.sparse_rows(), [A.field(x) for x in b])


def rank(A: Matrix) -> int:
    el = Eliminator(A.field, track=False)
    zero = A.field.zero
    for r in A.sparse_rows():
        el.add_row(r, zero)
    return len(el.pivots)


def check_certificate(fld: FieldSpec, rows: Sequence[SparseRow], rhs: Sequence[Scalar], y: SparseRow) -> bool:
    """y^T A == 0 and y^T b != 0, by direct multiplication."""
    acc: SparseRow = {}
    yb = fld.zero
    for i, c in y.items():
        _axpy(acc, c, rows[i])
        yb = yb + c * rhs[i]
    return not acc and yb != 0


def check_solution(fld: FieldSpec, rows: Sequence[SparseRow], rhs: Sequence[Scalar], x: Dict[int, Scalar]) -> bool:
    for r, b in zip(rows, rhs):
        s = fld.zero
        for k, v in r.items():
            if k in x:
                s = s + v * x[k]
        if s != b:
            return False
    return True
