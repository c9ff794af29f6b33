"""Finite-dimensional associative algebras over Q given by structure constants.

An algebra of dimension d is the tensor ``c[i][j][k]`` with
``e_i * e_j = sum_k c[i][j][k] e_k``.  Linear maps are d x d matrices whose
column j holds the image of ``e_j``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations_with_replacement, product
from typing import Callable, Iterable, Sequence

from .linalg import ONE, ZERO, Matrix, RowReducer, Subspace, as_fraction, solve

Sparse = dict[int, Fraction]


class Element:
    """Coordinate vector of an algebra element; supports +, -, * and **."""

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: "Algebra", coords: Iterable):
        self.algebra = algebra
        self.coords = tuple(as_fraction(c) for c in coords)
        if len(self.coords) != algebra.dim:
            raise ValueError(f"expected {algebra.dim} coordinates, got {len(self.coords)}")

    def _check(self, other: "Element"):
        if other.algebra.dim != self.algebra.dim:
            raise ValueError("elements of algebras of different dimension")

    def __add__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        return Element(self.algebra, (a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        return Element(self.algebra, (a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return Element(self.algebra, (-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, Element):
            return self.algebra.multiply(self, other)
        if isinstance(other, (int, Fraction)):
            return Element(self.algebra, (a * other for a in self.coords))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Element(self.algebra, (other * a for a in self.coords))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (ONE / other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = self.algebra.one
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def sparse(self) -> Sparse:
        return {i: c for i, c in enumerate(self.coords) if c}

    def __repr__(self):
        labels = self.algebra.labels or [f"e{i}" for i in range(self.algebra.dim)]
        terms = [f"{c}*{lab}" for c, lab in zip(self.coords, labels) if c]
        return "Element(" + (" + ".join(terms) or "0") + ")"


def _fraction_tensor(structure, d: int):
    out = []
    for i in range(d):
        row = []
        for j in range(d):
            vec = tuple(as_fraction(x) for x in structure[i][j])
            if len(vec) != d:
                raise ValueError("structure tensor must be d x d x d")
            row.append(vec)
        if len(structure[i]) != d:
            raise ValueError("structure tensor must be d x d x d")
        out.append(tuple(row))
    if len(structure) != d:
        raise ValueError("structure tensor must be d x d x d")
    return tuple(out)


@dataclass(frozen=True, eq=False)
class Algebra:
    dim: int
    structure: tuple
    unit: tuple | None = None
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "structure", _fraction_tensor(self.structure, self.dim))
        if self.unit is not None:
            unit = tuple(as_fraction(x) for x in self.unit)
            if len(unit) != self.dim:
                raise ValueError("unit has the wrong length")
            object.__setattr__(self, "unit", unit)
        if self.labels is not None:
            if len(self.labels) != self.dim:
                raise ValueError("labels have the wrong length")
            object.__setattr__(self, "labels", tuple(self.labels))

    @cached_property
    def table(self) -> tuple[tuple[tuple[tuple[int, Fraction], ...], ...], ...]:
        """Sparse products: ``table[i][j]`` lists ``(k, c)`` with c nonzero."""
        return tuple(
            tuple(tuple((k, c) for k, c in enumerate(vec) if c) for vec in row)
            for row in self.structure
        )

    def smul(self, x: Sparse, y: Sparse) -> Sparse:
        out: Sparse = {}
        table = self.table
        for i, xi in x.items():
            ti = table[i]
            for j, yj in y.items():
                f = xi * yj
                for k, c in ti[j]:
                    out[k] = out.get(k, ZERO) + f * c
        return {k: v for k, v in out.items() if v}

    def multiply(self, x: Element, y: Element) -> Element:
        if x.algebra.dim != self.dim or y.algebra.dim != self.dim:
            raise ValueError("dimension mismatch")
        out = [ZERO] * self.dim
        for k, v in self.smul(x.sparse(), y.sparse()).items():
            out[k] = v
        return Element(self, out)

    def element(self, coords: Iterable) -> Element:
        return Element(self, coords)

    def basis(self, i: int) -> Element:
        return Element(self, (ONE if k == i else ZERO for k in range(self.dim)))

    def basis_elements(self) -> list[Element]:
        return [self.basis(i) for i in range(self.dim)]

    @property
    def zero(self) -> Element:
        return Element(self, [ZERO] * self.dim)

    @property
    def one(self) -> Element:
        if self.unit is None:
            raise ValueError("algebra has no unit")
        return Element(self, self.unit)

    @property
    def is_unital(self) -> bool:
        return self.unit is not None

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else f"e{i}"


def multiply(a: Algebra, x: Element, y: Element) -> Element:
    return a.multiply(x, y)


@dataclass(frozen=True)
class LinearMap:
    """A linear map Q^d -> Q^d; column j of ``matrix`` is the image of e_j."""

    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        m = tuple(tuple(as_fraction(x) for x in row) for row in self.matrix)
        if any(len(row) != len(m) for row in m):
            raise ValueError("linear map matrix must be square")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @classmethod
    def identity(cls, d: int) -> "LinearMap":
        return cls(tuple(tuple(ONE if i == j else ZERO for j in range(d)) for i in range(d)))

    @classmethod
    def zero(cls, d: int) -> "LinearMap":
        return cls(tuple((ZERO,) * d for _ in range(d)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "LinearMap":
        d = len(columns)
        return cls(tuple(tuple(columns[j][i] for j in range(d)) for i in range(d)))

    @classmethod
    def from_function(cls, a: Algebra, fn: Callable[[Element], Element]) -> "LinearMap":
        return cls.from_columns([fn(a.basis(j)).coords for j in range(a.dim)])

    @classmethod
    def from_vec(cls, vec: Sequence, d: int) -> "LinearMap":
        """Inverse of :meth:`vec` (column-major)."""
        if len(vec) != d * d:
            raise ValueError("vector length is not d^2")
        return cls(tuple(tuple(vec[j * d + i] for j in range(d)) for i in range(d)))

    def vec(self) -> tuple[Fraction, ...]:
        d = self.dim
        return tuple(self.matrix[i][j] for j in range(d) for i in range(d))

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.matrix)

    def __call__(self, x: Element) -> Element:
        if x.algebra.dim != self.dim:
            raise ValueError("dimension mismatch")
        out = [ZERO] * self.dim
        for j, xj in enumerate(x.coords):
            if xj:
                for i, row in enumerate(self.matrix):
                    if row[j]:
                        out[i] += row[j] * xj
        return Element(x.algebra, out)

    def __add__(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.matrix, other.matrix)))

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.matrix, other.matrix)))

    def __neg__(self) -> "LinearMap":
        return LinearMap(tuple(tuple(-a for a in r) for r in self.matrix))

    def __mul__(self, c) -> "LinearMap":
        if not isinstance(c, (int, Fraction)):
            return NotImplemented
        return LinearMap(tuple(tuple(a * c for a in r) for r in self.matrix))

    __rmul__ = __mul__

    def __truediv__(self, c) -> "LinearMap":
        return self * (ONE / as_fraction(c))

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        cols = list(zip(*other.matrix))
        return LinearMap(tuple(tuple(sum((a * b for a, b in zip(r, c)), ZERO) for c in cols) for r in self.matrix))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.matrix)


def mult_operator(a: Algebra, c: Element, side: str = "left") -> LinearMap:
    """L_c (x -> c x) or R_c (x -> x c)."""
    if side == "left":
        return LinearMap.from_function(a, lambda x: c * x)
    if side == "right":
        return LinearMap.from_function(a, lambda x: x * c)
    raise ValueError(f"side must be 'left' or 'right', not {side!r}")


# -- validation ---------------------------------------------------------------


@dataclass
class ValidationReport:
    associativity_failures: list[tuple[int, int, int]] = field(default_factory=list)
    unit_failures: list[int] = field(default_factory=list)
    unital: bool = True

    @property
    def ok(self) -> bool:
        return self.unital and not self.associativity_failures and not self.unit_failures


def validate_algebra(a: Algebra) -> ValidationReport:
    report = ValidationReport(unital=a.is_unital)
    e = a.basis_elements()
    for i, j, k in product(range(a.dim), repeat=3):
        if (e[i] * e[j]) * e[k] != e[i] * (e[j] * e[k]):
            report.associativity_failures.append((i, j, k))
    if a.is_unital:
        one = a.one
        for i in range(a.dim):
            if one * e[i] != e[i] or e[i] * one != e[i]:
                report.unit_failures.append(i)
    return report


# -- linear conditions on elements and unknown maps -----------------------------


def solve_linear_conditions(ncols: int, rows: Iterable[Sparse]) -> Subspace:
    red = RowReducer(ncols)
    for row in rows:
        red.add(row)
    return red.nullspace()


def center(a: Algebra) -> Subspace:
    """Z(a) = {x : e_i x = x e_i for every basis e_i}."""
    d = a.dim

    def rows():
        for i in range(d):
            # coordinate k of e_i x - x e_i is linear in x
            acc: list[Sparse] = [{} for _ in range(d)]
            for j in range(d):
                for k, c in a.table[i][j]:
                    acc[k][j] = acc[k].get(j, ZERO) + c
                for k, c in a.table[j][i]:
                    acc[k][j] = acc[k].get(j, ZERO) - c
            yield from acc

    return solve_linear_conditions(d, rows())


def invert(a: Algebra, x: Element) -> Element | None:
    left = mult_operator(a, x, "left")
    y = solve([list(r) for r in left.matrix], a.one.coords)
    if y is None:
        return None
    y = a.element(y)
    if y * x != a.one:
        return None
    return y


def condition_p(a: Algebra) -> bool:
    """True iff x r x = 0 for all x forces r = 0 (checked via polarization)."""
    d = a.dim

    def rows():
        for i, j in combinations_with_replacement(range(d), 2):
            # coordinate k of e_i r e_j + e_j r e_i, linear in r
            acc: list[Sparse] = [{} for _ in range(d)]
            for s, t in ((i, j), (j, i)):
                for r in range(d):
                    for k, c in a.smul(a.smul({s: ONE}, {r: ONE}), {t: ONE}).items():
                        acc[k][r] = acc[k].get(r, ZERO) + c
            yield from acc

    return solve_linear_conditions(d, rows()).dim == 0


class MapForm:
    """Accumulates linear expressions in the entries of unknown maps.

    Each unknown map occupies d*d consecutive coordinates starting at its
    offset, column-major, so entry (r, j) of the map sits at
    ``offset + j*d + r``.  ``rows[k]`` is coordinate k of the expression.
    """

    def __init__(self, a: Algebra):
        self.a = a
        self.rows: list[Sparse] = [{} for _ in range(a.dim)]
        self.const: list[Fraction] = [ZERO] * a.dim

    def add_map_term(self, coef: Fraction, u: Sparse | None, v: Sparse, w: Sparse | None, offset: int = 0):
        """Add ``coef * u * D(v) * w`` for the unknown map D at ``offset``."""
        a, d = self.a, self.a.dim
        for r in range(d):
            t: Sparse = {r: ONE}
            if u is not None:
                t = a.smul(u, t)
            if w is not None and t:
                t = a.smul(t, w)
            if not t:
                continue
            for j, vj in v.items():
                col = offset + j * d + r
                f = coef * vj
                for k, tk in t.items():
                    row = self.rows[k]
                    nv = row.get(col, ZERO) + f * tk
                    if nv:
                        row[col] = nv
                    else:
                        row.pop(col, None)

    def add_known(self, coef: Fraction, x: Sparse):
        for k, v in x.items():
            self.const[k] += coef * v

    def equations(self) -> list[Sparse]:
        return self.rows


def _basis_products(a: Algebra, i: int, j: int) -> Sparse:
    return {k: c for k, c in a.table[i][j]}


def derivation_space(a: Algebra) -> Subspace:
    """Maps D with D(e_i e_j) = D(e_i) e_j + e_i D(e_j), vectorized column-major."""
    d = a.dim

    def rows():
        for i, j in product(range(d), repeat=2):
            f = MapForm(a)
            f.add_map_term(ONE, None, _basis_products(a, i, j), None)
            f.add_map_term(-ONE, None, {i: ONE}, {j: ONE})
            f.add_map_term(-ONE, {i: ONE}, {j: ONE}, None)
            yield from f.equations()

    return solve_linear_conditions(d * d, rows())


def _jordan_derivation_rows(a: Algebra):
    d = a.dim
    for i, j in combinations_with_replacement(range(d), 2):
        f = MapForm(a)
        circ = _basis_products(a, i, j)
        for k, c in a.table[j][i]:
            circ[k] = circ.get(k, ZERO) + c
        f.add_map_term(ONE, None, circ, None)
        f.add_map_term(-ONE, None, {i: ONE}, {j: ONE})
        f.add_map_term(-ONE, {j: ONE}, {i: ONE}, None)
        f.add_map_term(-ONE, None, {j: ONE}, {i: ONE})
        f.add_map_term(-ONE, {i: ONE}, {j: ONE}, None)
        yield from f.equations()


def _commuting_rows(a: Algebra):
    d = a.dim
    for i, j in combinations_with_replacement(range(d), 2):
        f = MapForm(a)
        # [D(e_i), e_j] + [D(e_j), e_i]
        f.add_map_term(ONE, None, {i: ONE}, {j: ONE})
        f.add_map_term(-ONE, {j: ONE}, {i: ONE}, None)
        f.add_map_term(ONE, None, {j: ONE}, {i: ONE})
        f.add_map_term(-ONE, {i: ONE}, {j: ONE}, None)
        yield from f.equations()


def jordan_derivation_space(a: Algebra) -> Subspace:
    return solve_linear_conditions(a.dim ** 2, _jordan_derivation_rows(a))


def commuting_map_space(a: Algebra) -> Subspace:
    return solve_linear_conditions(a.dim ** 2, _commuting_rows(a))


def commuting_jordan_derivation_space(a: Algebra) -> Subspace:
    def rows():
        yield from _jordan_derivation_rows(a)
        yield from _commuting_rows(a)

    return solve_linear_conditions(a.dim ** 2, rows())


# -- classification -------------------------------------------------------------


@dataclass
class ClassificationReport:
    left_centralizer: bool
    right_centralizer: bool
    two_sided_centralizer: bool
    jordan_left: bool
    jordan_right: bool
    jordan_two_sided: bool
    jordan_centralizer: bool
    derivation: bool
    jordan_derivation: bool
    commuting: bool
    l_generalized: bool
    r_generalized: bool
    two_sided_generalized: bool
    l_witness: LinearMap | None = None
    r_witness: LinearMap | None = None

    FLAGS = (
        "left_centralizer", "right_centralizer", "two_sided_centralizer",
        "jordan_left", "jordan_right", "jordan_two_sided", "jordan_centralizer",
        "derivation", "jordan_derivation", "commuting",
        "l_generalized", "r_generalized", "two_sided_generalized",
    )

    def flags(self) -> dict[str, bool]:
        return {name: getattr(self, name) for name in self.FLAGS}


def _all_pairs(a: Algebra, check: Callable[[Element, Element], bool], symmetric: bool = False) -> bool:
    e = a.basis_elements()
    pairs = combinations_with_replacement(range(a.dim), 2) if symmetric else product(range(a.dim), repeat=2)
    return all(check(e[i], e[j]) for i, j in pairs)


def is_derivation(a: Algebra, D: LinearMap) -> bool:
    return _all_pairs(a, lambda x, y: D(x * y) == D(x) * y + x * D(y))


def classify_map(a: Algebra, F: LinearMap) -> ClassificationReport:
    if F.dim != a.dim:
        raise ValueError(f"map of dimension {F.dim} on algebra of dimension {a.dim}")
    T = F

    def circ(x, y):
        return x * y + y * x

    left = _all_pairs(a, lambda x, y: T(x * y) == T(x) * y)
    right = _all_pairs(a, lambda x, y: T(x * y) == x * T(y))
    jleft = _all_pairs(a, lambda x, y: T(circ(x, y)) == T(x) * y + T(y) * x, symmetric=True)
    jright = _all_pairs(a, lambda x, y: T(circ(x, y)) == x * T(y) + y * T(x), symmetric=True)
    jcent = _all_pairs(a, lambda x, y: T(circ(x, y)) == circ(T(x), y) == circ(x, T(y)))
    der = is_derivation(a, T)
    jder = _all_pairs(
        a, lambda x, y: T(circ(x, y)) == T(x) * y + y * T(x) + T(y) * x + x * T(y), symmetric=True
    )
    comm = _all_pairs(
        a, lambda x, y: (T(x) * y - y * T(x)) + (T(y) * x - x * T(y)) == a.zero, symmetric=True
    )

    l_gen = r_gen = False
    l_wit = r_wit = None
    if a.is_unital:
        f1 = T(a.one)
        l_wit = T - mult_operator(a, f1, "left")
        r_wit = T - mult_operator(a, f1, "right")
        l_gen = is_derivation(a, l_wit) and _all_pairs(a, lambda x, y: T(x * y) == T(x) * y + x * l_wit(y))
        r_gen = is_derivation(a, r_wit) and _all_pairs(a, lambda x, y: T(x * y) == r_wit(x) * y + x * T(y))
    return ClassificationReport(
        left_centralizer=left,
        right_centralizer=right,
        two_sided_centralizer=left and right,
        jordan_left=jleft,
        jordan_right=jright,
        jordan_two_sided=jleft and jright,
        jordan_centralizer=jcent,
        derivation=der,
        jordan_derivation=jder,
        commuting=comm,
        l_generalized=l_gen,
        r_generalized=r_gen,
        two_sided_generalized=l_gen and r_gen,
        l_witness=l_wit if l_gen else None,
        r_witness=r_wit if r_gen else None,
    )


# -- builders -----------------------------------------------------------------


def full_matrix(k: int) -> Algebra:
    """M_k(Q) with matrix units E_ij ordered row-major."""
    if k < 1:
        raise ValueError("matrix size must be at least 1")
    idx = {(i, j): i * k + j for i in range(k) for j in range(k)}
    d = k * k
    c = [[[0] * d for _ in range(d)] for _ in range(d)]
    for (i, j), p in idx.items():
        for (jj, l), q in idx.items():
            if j == jj:
                c[p][q][idx[i, l]] = 1
    unit = [1 if i == j else 0 for i in range(k) for j in range(k)]
    labels = [f"E{i + 1}{j + 1}" for i in range(k) for j in range(k)]
    return Algebra(d, c, unit, labels)


def algebra_from_matrices(mats: Sequence[Matrix], labels: Sequence[str] | None = None) -> Algebra:
    """Structure constants of the algebra spanned by ``mats`` (closed under products).

    The identity matrix must lie in the span; its coordinates become the unit.
    """
    from .linalg import mat_mul

    d = len(mats)
    flat = [[x for row in m for x in row] for m in mats]
    columns = [list(col) for col in zip(*flat)]  # matrix whose columns are flat basis vectors

    def coords(m):
        target = [x for row in m for x in row]
        sol = solve(columns, target)
        if sol is None:
            raise ValueError("matrix span is not closed under multiplication")
        return sol

    c = [[coords(mat_mul(mats[i], mats[j])) for j in range(d)] for i in range(d)]
    size = len(mats[0])
    ident = [[ONE if i == j else ZERO for j in range(size)] for i in range(size)]
    return Algebra(d, c, coords(ident), labels)


def direct_sum(*algebras: Algebra) -> Algebra:
    d = sum(a.dim for a in algebras)
    c = [[[ZERO] * d for _ in range(d)] for _ in range(d)]
    unit = []
    off = 0
    for a in algebras:
        for i, j, k in product(range(a.dim), repeat=3):
            c[off + i][off + j][off + k] = a.structure[i][j][k]
        unit.extend(a.one.coords)
        off += a.dim
    return Algebra(d, c, unit)


def scalars() -> Algebra:
    return Algebra(1, [[[1]]], [1], ["1"])
