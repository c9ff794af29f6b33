"""Triangular algebras Tri(A, M, B) and standard instances.

Coordinates of Tri(A, M, B) are ordered (A-block, M-block, B-block).
"""
from __future__ import annotations

import random
import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .algebra import Algebra, Element, algebra_from_matrices, full_matrix, scalars, validate_algebra
from .linalg import ONE, ZERO, Matrix, Subspace, as_fraction, mat_mul, nullspace, rank, solve


def _tensor3(t, shape: tuple[int, int, int]):
    a, b, c = shape
    if len(t) != a or any(len(x) != b for x in t) or any(len(y) != c for x in t for y in x):
        raise ValueError(f"action tensor must have shape {shape}")
    return tuple(tuple(tuple(as_fraction(z) for z in y) for y in x) for x in t)


@dataclass(frozen=True)
class Bimodule:
    """(A, B)-bimodule on Q^dimM.

    ``left_action[i][m]`` = coordinates of e_i^A . m_m,
    ``right_action[m][j]`` = coordinates of m_m . e_j^B.
    """

    dimM: int
    left_action: tuple
    right_action: tuple

    def left(self, a_coords: Sequence[Fraction], m: Sequence[Fraction]) -> list[Fraction]:
        out = [ZERO] * self.dimM
        for i, ai in enumerate(a_coords):
            if not ai:
                continue
            for p, mp in enumerate(m):
                if mp:
                    for q, c in enumerate(self.left_action[i][p]):
                        if c:
                            out[q] += ai * mp * c
        return out

    def right(self, m: Sequence[Fraction], b_coords: Sequence[Fraction]) -> list[Fraction]:
        out = [ZERO] * self.dimM
        for p, mp in enumerate(m):
            if not mp:
                continue
            for j, bj in enumerate(b_coords):
                if bj:
                    for q, c in enumerate(self.right_action[p][j]):
                        if c:
                            out[q] += mp * bj * c
        return out

    def errors(self, A: Algebra, B: Algebra) -> list[str]:
        """Every violated bimodule axiom on basis elements."""
        errs = []
        if len(self.left_action) != A.dim or len(self.right_action) != self.dimM:
            return ["action tensors do not match component dimensions"]
        try:
            _tensor3(self.left_action, (A.dim, self.dimM, self.dimM))
            _tensor3(self.right_action, (self.dimM, B.dim, self.dimM))
        except ValueError as exc:
            return [str(exc)]
        ms = [[ONE if q == p else ZERO for q in range(self.dimM)] for p in range(self.dimM)]
        ea = A.basis_elements()
        eb = B.basis_elements()
        for i, j in product(range(A.dim), repeat=2):
            for p, m in enumerate(ms):
                if self.left((ea[i] * ea[j]).coords, m) != self.left(ea[i].coords, self.left(ea[j].coords, m)):
                    errs.append(f"(a{i} a{j}) m{p} != a{i} (a{j} m{p})")
        for i, j in product(range(B.dim), repeat=2):
            for p, m in enumerate(ms):
                if self.right(m, (eb[i] * eb[j]).coords) != self.right(self.right(m, eb[i].coords), eb[j].coords):
                    errs.append(f"m{p} (b{i} b{j}) != (m{p} b{i}) b{j}")
        for p, m in enumerate(ms):
            if self.left(A.one.coords, m) != m:
                errs.append(f"1_A m{p} != m{p}")
            if self.right(m, B.one.coords) != m:
                errs.append(f"m{p} 1_B != m{p}")
            for i, j in product(range(A.dim), range(B.dim)):
                if self.right(self.left(ea[i].coords, m), eb[j].coords) != self.left(
                    ea[i].coords, self.right(m, eb[j].coords)
                ):
                    errs.append(f"(a{i} m{p}) b{j} != a{i} (m{p} b{j})")
        return errs

    def __post_init__(self):
        object.__setattr__(self, "left_action", tuple(tuple(tuple(as_fraction(z) for z in y) for y in x) for x in self.left_action))
        object.__setattr__(self, "right_action", tuple(tuple(tuple(as_fraction(z) for z in y) for y in x) for x in self.right_action))


@dataclass(frozen=True, eq=False)
class TriangularAlgebra:
    algebra: Algebra
    A: Algebra
    B: Algebra
    M: Bimodule

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def a_block(self) -> range:
        return range(0, self.A.dim)

    @property
    def m_block(self) -> range:
        return range(self.A.dim, self.A.dim + self.M.dimM)

    @property
    def b_block(self) -> range:
        return range(self.A.dim + self.M.dimM, self.dim)

    @property
    def block_map(self) -> dict[str, range]:
        return {"A": self.a_block, "M": self.m_block, "B": self.b_block}

    def compose(self, a=None, m=None, b=None) -> Element:
        """The element [[a, m], [0, b]] from block coordinates."""
        a = list(a) if a is not None else [ZERO] * self.A.dim
        m = list(m) if m is not None else [ZERO] * self.M.dimM
        b = list(b) if b is not None else [ZERO] * self.B.dim
        return self.algebra.element(a + m + b)

    def faithful(self) -> tuple[bool, bool]:
        return check_faithful(self.M, self.A, self.B)


def build_triangular(A: Algebra, B: Algebra, M: Bimodule, labels: Sequence[str] | None = None) -> TriangularAlgebra:
    if M.dimM == 0:
        raise ValueError("the bimodule must be nonzero (a zero bimodule is never faithful)")
    for name, comp in (("A", A), ("B", B)):
        rep = validate_algebra(comp)
        if not rep.ok:
            raise ValueError(f"component {name} is not a unital associative algebra")
    errs = M.errors(A, B)
    if errs:
        raise ValueError("invalid bimodule: " + "; ".join(errs[:5]))
    dA, dM, dB = A.dim, M.dimM, B.dim
    d = dA + dM + dB
    oM, oB = dA, dA + dM
    c = [[[ZERO] * d for _ in range(d)] for _ in range(d)]
    for i, j, k in product(range(dA), repeat=3):
        c[i][j][k] = A.structure[i][j][k]
    for i, j, k in product(range(dB), repeat=3):
        c[oB + i][oB + j][oB + k] = B.structure[i][j][k]
    for i, p, q in product(range(dA), range(dM), range(dM)):
        c[i][oM + p][oM + q] = M.left_action[i][p][q]
    for p, j, q in product(range(dM), range(dB), range(dM)):
        c[oM + p][oB + j][oM + q] = M.right_action[p][j][q]
    unit = list(A.one.coords) + [ZERO] * dM + list(B.one.coords)
    if labels is None:
        labels = (
            [f"a:{A.label(i)}" for i in range(dA)]
            + [f"m{p}" for p in range(dM)]
            + [f"b:{B.label(j)}" for j in range(dB)]
        )
    t = TriangularAlgebra(Algebra(d, c, unit, labels), A, B, M)
    if t.faithful() != (True, True):
        warnings.warn("bimodule is not faithful; theorem hypotheses do not hold", stacklevel=2)
    return t


def check_faithful(M: Bimodule, A: Algebra, B: Algebra) -> tuple[bool, bool]:
    """(left faithful over A, right faithful over B)."""
    # a . m_p = 0 for all p: rows indexed by (p, q), columns by a-coordinates
    left_rows = [[M.left_action[i][p][q] for i in range(A.dim)] for p in range(M.dimM) for q in range(M.dimM)]
    right_rows = [[M.right_action[p][j][q] for j in range(B.dim)] for p in range(M.dimM) for q in range(M.dimM)]
    left = nullspace(left_rows, A.dim).dim == 0 if left_rows else A.dim == 0
    right = nullspace(right_rows, B.dim).dim == 0 if right_rows else B.dim == 0
    return left, right


def center_by_formula(t: TriangularAlgebra) -> Subspace:
    """{a + b : a in Z(A), b in Z(B), a m = m b for all m}, in Tri coordinates."""
    dA, dM, dB = t.A.dim, t.M.dimM, t.B.dim
    rows = []
    # unknown vector (a, b) of length dA + dB
    for comp, off in ((t.A, 0), (t.B, dA)):
        for v in _commutator_rows(comp):
            row = [ZERO] * (dA + dB)
            row[off: off + comp.dim] = v
            rows.append(row)
    for p in range(dM):
        for q in range(dM):
            row = [ZERO] * (dA + dB)
            for i in range(dA):
                row[i] += t.M.left_action[i][p][q]
            for j in range(dB):
                row[dA + j] -= t.M.right_action[p][j][q]
            rows.append(row)
    ker = nullspace(rows, dA + dB)
    embedded = [list(v[:dA]) + [ZERO] * dM + list(v[dA:]) for v in ker.basis]
    return Subspace.span(t.dim, embedded)


def _commutator_rows(a: Algebra) -> list[list[Fraction]]:
    rows = []
    for i in range(a.dim):
        for k in range(a.dim):
            rows.append([a.structure[i][j][k] - a.structure[j][i][k] for j in range(a.dim)])
    return rows


# -- builders -----------------------------------------------------------------


def matrix_unit(p: int, q: int, i: int, j: int) -> Matrix:
    return [[ONE if (r, s) == (i, j) else ZERO for s in range(q)] for r in range(p)]


def matrix_space_bimodule(A_mats: Sequence[Matrix], B_mats: Sequence[Matrix], M_mats: Sequence[Matrix]) -> Bimodule:
    """Bimodule given by matrix multiplication a.m = a m, m.b = m b on span(M_mats)."""
    flat = [[x for row in m for x in row] for m in M_mats]
    columns = [list(col) for col in zip(*flat)]

    def coords(m):
        sol = solve(columns, [x for row in m for x in row])
        if sol is None:
            raise ValueError("bimodule span is not invariant under the actions")
        return sol

    left = [[coords(mat_mul(a, m)) for m in M_mats] for a in A_mats]
    right = [[coords(mat_mul(m, b)) for b in B_mats] for m in M_mats]
    return Bimodule(len(M_mats), left, right)


def triangular_from_matrices(A_mats, B_mats, M_mats, labels=None) -> TriangularAlgebra:
    A = algebra_from_matrices(A_mats)
    B = algebra_from_matrices(B_mats)
    M = matrix_space_bimodule(A_mats, B_mats, M_mats)
    return build_triangular(A, B, M, labels)


def upper_triangular(k: int) -> TriangularAlgebra:
    """T_k(Q) as Tri(Q, Q^{1 x (k-1)}, T_{k-1}(Q)); basis e_ij (i <= j) row-major."""
    if k < 2:
        raise ValueError("upper_triangular needs k >= 2 (k = 1 has a zero corner bimodule)")
    pairs = [(i, j) for i in range(k) for j in range(i, k)]
    A_mats = [matrix_unit(1, 1, 0, 0)]
    M_mats = [matrix_unit(1, k - 1, 0, j) for j in range(k - 1)]
    B_mats = [matrix_unit(k - 1, k - 1, i - 1, j - 1) for i, j in pairs if i >= 1]
    labels = [f"e{i + 1}{j + 1}" for i, j in pairs]
    return triangular_from_matrices(A_mats, B_mats, M_mats, labels)


def matrix_bimodule(p: int, q: int) -> TriangularAlgebra:
    """Tri(M_p(Q), Q^{p x q}, M_q(Q))."""
    if p < 1 or q < 1:
        raise ValueError("block sizes must be at least 1")
    A_mats = [matrix_unit(p, p, i, j) for i in range(p) for j in range(p)]
    B_mats = [matrix_unit(q, q, i, j) for i in range(q) for j in range(q)]
    M_mats = [matrix_unit(p, q, i, j) for i in range(p) for j in range(q)]
    labels = (
        [f"A{i + 1}{j + 1}" for i in range(p) for j in range(p)]
        + [f"M{i + 1}{j + 1}" for i in range(p) for j in range(q)]
        + [f"B{i + 1}{j + 1}" for i in range(q) for j in range(q)]
    )
    return triangular_from_matrices(A_mats, B_mats, M_mats, labels)


def standard_builder(kind: str, *sizes: int):
    if kind == "upper_triangular":
        return upper_triangular(*sizes)
    if kind == "full_matrix":
        return full_matrix(*sizes)
    if kind == "matrix_bimodule":
        return matrix_bimodule(*sizes)
    raise ValueError(f"unknown builder kind {kind!r}")


BUILTIN_NAMES = ("T2", "T3", "T4", "M2", "TriM2x1")


def builtin(name: str):
    """Named instances: T2, T3, T4, M2, TriM2x1."""
    if name in ("T2", "T3", "T4"):
        return upper_triangular(int(name[1]))
    if name == "M2":
        return full_matrix(2)
    if name == "TriM2x1":
        return matrix_bimodule(2, 1)
    raise KeyError(name)


# -- randomized instances --------------------------------------------------------


def _subalgebra_catalog(p: int) -> list[list[Matrix]]:
    """Unital subalgebras of M_p(Q) of dimension at most 4, as matrix bases."""
    I = [[ONE if i == j else ZERO for j in range(p)] for i in range(p)]
    E = lambda i, j: matrix_unit(p, p, i, j)  # noqa: E731
    if p == 1:
        return [[I]]
    if p == 2:
        return [
            [I],
            [E(0, 0), E(1, 1)],
            [I, E(0, 1)],
            [E(0, 0), E(0, 1), E(1, 1)],
            [E(0, 0), E(0, 1), E(1, 0), E(1, 1)],
        ]
    if p == 3:
        return [
            [I],
            [E(0, 0), E(1, 1), E(2, 2)],
            [I, E(0, 2)],
            [E(0, 0), E(1, 1), E(2, 2), E(0, 2)],
        ]
    raise ValueError("catalog only covers p <= 3")


def _random_invertible(rng: random.Random, n: int) -> Matrix:
    while True:
        m = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
        if rank(m) == n:
            return m


def _rebase(mats: Sequence[Matrix], S: Matrix) -> list[Matrix]:
    """New basis b'_i = sum_j S[i][j] b_j."""
    out = []
    for row in S:
        acc = [[ZERO] * len(mats[0][0]) for _ in range(len(mats[0]))]
        for s, m in zip(row, mats):
            if s:
                acc = [[x + s * y for x, y in zip(ar, mr)] for ar, mr in zip(acc, m)]
        out.append(acc)
    return out


def random_triangular(rng: random.Random, max_dim: int = 4) -> TriangularAlgebra:
    """A faithful Tri(A, M, B) with random block shapes and a random change of basis.

    A sits in M_p(Q), B in M_q(Q), M is all of Q^{p x q}; each block basis is
    replaced by a random invertible combination so the structure constants
    are not just matrix units.
    """
    while True:
        p = rng.choice([1, 2, 3])
        q = rng.choice([1, 2, 3])
        if p * q <= max_dim:
            break
    A_mats = rng.choice([m for m in _subalgebra_catalog(p) if len(m) <= max_dim])
    B_mats = rng.choice([m for m in _subalgebra_catalog(q) if len(m) <= max_dim])
    M_mats = [matrix_unit(p, q, i, j) for i in range(p) for j in range(q)]
    A_mats = _rebase(A_mats, _random_invertible(rng, len(A_mats)))
    B_mats = _rebase(B_mats, _random_invertible(rng, len(B_mats)))
    M_mats = _rebase(M_mats, _random_invertible(rng, len(M_mats)))
    return triangular_from_matrices(A_mats, B_mats, M_mats)


def scalar_tri() -> TriangularAlgebra:
    """Tri(Q, Q, Q), which is T_2(Q) assembled from components."""
    Q = scalars()
    return build_triangular(Q, Q, Bimodule(1, [[[1]]], [[[1]]]))
