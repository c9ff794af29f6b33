"""Exact dense linear algebra over the rationals.

Matrices are plain lists of rows of :class:`fractions.Fraction`.  Subspaces
carry their reduced row-echelon basis, so two subspaces are equal exactly
when their bases are equal.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Matrix = list[list[Fraction]]
Vector = tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted")
    return Fraction(x)


def matrix(rows: Iterable[Iterable]) -> Matrix:
    return [[as_fraction(x) for x in row] for row in rows]


def zeros(rows: int, cols: int) -> Matrix:
    return [[ZERO] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def transpose(m: Matrix) -> Matrix:
    return [list(col) for col in zip(*m)]


def mat_vec(m: Matrix, v: Sequence[Fraction]) -> list[Fraction]:
    return [sum((a * b for a, b in zip(row, v) if a and b), ZERO) for row in m]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col) if x and y), ZERO) for col in bt] for row in a]


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row-echelon form of ``m`` and its pivot columns.

    The input is not modified.  Zero rows are kept at the bottom so the
    result has the same shape as ``m``.
    """
    a = [list(row) for row in m]
    if not a:
        return a, []
    nrows, ncols = len(a), len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = ONE / a[r][c]
        a[r] = [x * inv for x in a[r]]
        prow = a[r]
        for i in range(nrows):
            f = a[i][c]
            if i != r and f:
                a[i] = [x - f * y for x, y in zip(a[i], prow)]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def determinant(m: Matrix) -> Fraction:
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    a = [list(row) for row in m]
    det = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return ZERO
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        piv = a[c][c]
        det *= piv
        for i in range(c + 1, n):
            f = a[i][c] / piv
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def solve(m: Matrix, b: Sequence[Fraction]) -> list[Fraction] | None:
    """One solution of ``m x = b`` (free variables set to zero), or None."""
    ncols = len(m[0]) if m else 0
    aug = [list(row) + [as_fraction(bi)] for row, bi in zip(m, b)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [ZERO] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return x


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^ambient_dim stored by its canonical RREF basis."""

    ambient_dim: int
    basis: tuple[Vector, ...] = ()

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        rows = [[as_fraction(x) for x in v] for v in vectors]
        for row in rows:
            if len(row) != ambient_dim:
                raise ValueError(f"vector of length {len(row)} in ambient dimension {ambient_dim}")
        if not rows:
            return cls(ambient_dim, ())
        red, pivots = rref(rows)
        return cls(ambient_dim, tuple(tuple(row) for row in red[: len(pivots)]))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, tuple(tuple(row) for row in identity(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> list[int]:
        return [next(i for i, x in enumerate(row) if x) for row in self.basis]

    def residual(self, v: Sequence) -> list[Fraction]:
        r = [as_fraction(x) for x in v]
        if len(r) != self.ambient_dim:
            raise ValueError("dimension mismatch")
        for row, p in zip(self.basis, self.pivots):
            f = r[p]
            if f:
                r = [x - f * y for x, y in zip(r, row)]
        return r

    def contains(self, v: Sequence) -> bool:
        return not any(self.residual(v))

    def issubset(self, other: "Subspace") -> bool:
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("dimension mismatch")
        return all(other.contains(b) for b in self.basis)

    def complement_equations(self) -> "Subspace":
        """Subspace of linear functionals vanishing on self (its annihilator)."""
        if not self.basis:
            return Subspace.full(self.ambient_dim)
        return nullspace([list(b) for b in self.basis])

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("dimension mismatch")
        return Subspace.span(self.ambient_dim, list(self.basis) + list(other.basis))

    def intersection(self, other: "Subspace") -> "Subspace":
        eqs = list(self.complement_equations().basis) + list(other.complement_equations().basis)
        if not eqs:
            return Subspace.full(self.ambient_dim)
        return nullspace([list(e) for e in eqs])


def nullspace(m: Matrix, cols: int | None = None) -> Subspace:
    """Canonical basis of ``{v : m v = 0}``.

    ``cols`` is needed only when ``m`` has no rows.
    """
    if not m:
        if cols is None:
            raise ValueError("column count unknown for an empty matrix")
        return Subspace.full(cols)
    ncols = len(m[0])
    red, pivots = rref(m)
    return _kernel_from_rref(ncols, list(zip(pivots, red)))


def _kernel_from_rref(ncols: int, pivot_rows: list[tuple[int, Sequence[Fraction]]]) -> Subspace:
    pivset = {p for p, _ in pivot_rows}
    vecs = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [ZERO] * ncols
        v[f] = ONE
        for p, row in pivot_rows:
            if row[f]:
                v[p] = -row[f]
        vecs.append(v)
    return Subspace.span(ncols, vecs)


def subspace_compare(s1: Subspace, s2: Subspace) -> str:
    if s1.ambient_dim != s2.ambient_dim:
        raise ValueError(f"ambient dimensions differ: {s1.ambient_dim} vs {s2.ambient_dim}")
    a = s1.issubset(s2)
    b = s2.issubset(s1)
    if a and b:
        return "equal"
    if a:
        return "s1_subset_s2"
    if b:
        return "s2_subset_s1"
    return "incomparable"


class RowReducer:
    """Incremental Gauss-Jordan elimination on sparse rows.

    Rows are dicts ``{column: value}``.  Each stored row owns a pivot column
    holding 1 that is zero in every other stored row, so feeding thousands
    of mostly redundant equations costs little more than the rank.  Pivots
    are not necessarily leading columns; use :meth:`nullspace` or
    :meth:`row_space` for canonical output.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._rows: dict[int, dict[int, Fraction]] = {}
        self.rows_seen = 0

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, row: dict[int, Fraction]) -> dict[int, Fraction]:
        r = {c: v for c, v in row.items() if v}
        for c in [c for c in r if c in self._rows]:
            f = r.get(c)
            if not f:
                continue
            for cc, vv in self._rows[c].items():
                nv = r.get(cc, ZERO) - f * vv
                if nv:
                    r[cc] = nv
                else:
                    r.pop(cc, None)
        return r

    def add(self, row: dict[int, Fraction]) -> bool:
        self.rows_seen += 1
        r = self.reduce(row)
        if not r:
            return False
        p = min(r)
        inv = ONE / r[p]
        r = {c: v * inv for c, v in r.items()}
        for q, other in self._rows.items():
            f = other.get(p)
            if f:
                for cc, vv in r.items():
                    nv = other.get(cc, ZERO) - f * vv
                    if nv:
                        other[cc] = nv
                    else:
                        other.pop(cc, None)
        self._rows[p] = r
        return True

    def pivots(self) -> list[int]:
        return sorted(self._rows)

    def dense_rows(self) -> Matrix:
        out = []
        for p in self.pivots():
            row = [ZERO] * self.ncols
            for c, v in self._rows[p].items():
                row[c] = v
            out.append(row)
        return out

    def row_space(self) -> Subspace:
        return Subspace.span(self.ncols, self.dense_rows())

    def nullspace(self) -> Subspace:
        return _kernel_from_rref(self.ncols, list(zip(self.pivots(), self.dense_rows())))
