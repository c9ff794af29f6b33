"""Compile functional identities into exact linear systems and solve them.

The unknown maps are vectorized column-major, one block of d*d coordinates
per map symbol in order of first appearance.  An identity of degree n holds
for every X exactly when its symmetrized multilinear form vanishes on every
multiset of n basis vectors (characteristic 0), which gives finitely many
linear equations in the unknown entries.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, permutations
from typing import Iterable, Mapping, Sequence

from .algebra import Algebra, Element, LinearMap, MapForm, Sparse, center, classify_map, derivation_space, invert, mult_operator
from .dsl import Central, Expression, MapApp, NormalizedIdentity, Power, UNIT
from .linalg import ONE, ZERO, Matrix, RowReducer, Subspace, subspace_compare
from .pointwise import DEFAULT_SEED, random_element, random_in, random_rational


class BindingError(ValueError):
    pass


@dataclass(frozen=True)
class MapLayout:
    symbols: tuple[str, ...]
    dim: int

    @property
    def size(self) -> int:
        return len(self.symbols) * self.dim ** 2

    def offset(self, symbol: str) -> int:
        return self.symbols.index(symbol) * self.dim ** 2

    def encode(self, maps: Mapping[str, LinearMap]) -> tuple[Fraction, ...]:
        out: list[Fraction] = []
        for s in self.symbols:
            out.extend(maps[s].vec())
        return tuple(out)

    def decode(self, vec: Sequence[Fraction]) -> dict[str, LinearMap]:
        if len(vec) != self.size:
            raise ValueError("vector does not match layout")
        d2 = self.dim ** 2
        return {s: LinearMap.from_vec(vec[i * d2: (i + 1) * d2], self.dim) for i, s in enumerate(self.symbols)}


@dataclass
class Binding:
    """Values for the symbols of an identity plus side constraints.

    ``in_center`` lists map symbols s constrained by s(1) in Z; ``ties`` lists
    pairs (s, t) constrained by s = t.  Central symbols listed in
    ``invertible`` (all of them when None) must be invertible.
    """

    central: dict[str, Element] = field(default_factory=dict)
    fixed: dict[str, LinearMap] = field(default_factory=dict)
    in_center: tuple[str, ...] = ()
    ties: tuple[tuple[str, str], ...] = ()
    invertible: tuple[str, ...] | None = None


def check_binding(identity: NormalizedIdentity, a: Algebra, b: Binding, z: Subspace | None = None) -> Subspace:
    z = center(a) if z is None else z
    for name in identity.central:
        if name not in b.central:
            raise BindingError(f"central symbol {name!r} is not bound")
        val = b.central[name]
        if val.algebra.dim != a.dim:
            raise BindingError(f"value of {name!r} has the wrong dimension")
        if not z.contains(val.coords):
            raise BindingError(f"value of {name!r} is not central")
        needs_inverse = b.invertible is None or name in b.invertible
        if needs_inverse and invert(a, val) is None:
            raise BindingError(f"value of {name!r} is not invertible")
    names = set(identity.maps)
    for s in list(b.in_center) + [x for pair in b.ties for x in pair]:
        if s not in names:
            raise BindingError(f"side constraint refers to unknown map {s!r}")
    for s, m in b.fixed.items():
        if m.dim != a.dim:
            raise BindingError(f"fixed map {s!r} has the wrong dimension")
    return z


@dataclass
class ConstraintSystem:
    layout: MapLayout
    rows: list[Sparse]
    constants: list[Fraction]
    core_rows: int

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return self.layout.size

    def matrix(self) -> Matrix:
        out = []
        for row in self.rows:
            dense = [ZERO] * self.n_cols
            for c, v in row.items():
                dense[c] = v
            out.append(dense)
        return out

    @property
    def homogeneous(self) -> bool:
        return not any(self.constants)

    def residuals(self, vec: Sequence[Fraction]) -> list[Fraction]:
        return [sum((v * vec[c] for c, v in row.items()), ZERO) + k for row, k in zip(self.rows, self.constants)]


def _sparse(x: Element) -> Sparse:
    return x.sparse()


def _mul(a: Algebra, x: Sparse | None, y: Sparse) -> Sparse:
    return dict(y) if x is None else a.smul(x, y)


def _term_into(
    a: Algebra,
    coef: Fraction,
    factors,
    args: Sequence[int],
    central: Mapping[str, Sparse],
    fixed: Mapping[str, LinearMap],
    layout: MapLayout,
    form: MapForm,
):
    """Add one term, with its X-slots filled by basis vectors ``args``."""
    pos = 0
    cur: Sparse | None = None
    left: Sparse | None = None
    v: Sparse | None = None
    unknown: str | None = None
    for f in factors:
        if isinstance(f, Power):
            for i in args[pos: pos + f.k]:
                cur = _mul(a, cur, {i: ONE})
            pos += f.k
        elif isinstance(f, Central):
            cur = _mul(a, cur, central[f.name])
        else:
            arg: Sparse | None = None
            for i in args[pos: pos + f.k]:
                arg = _mul(a, arg, {i: ONE})
            pos += f.k
            if f.name in fixed:
                img = fixed[f.name](_element(a, arg)).sparse()
                cur = _mul(a, cur, img)
            else:
                left, v, unknown, cur = cur, arg, f.name, None
        if cur is not None and not cur:
            return
    if unknown is None:
        form.add_known(coef, cur if cur is not None else {})
    elif v:
        form.add_map_term(coef, left, v, cur, layout.offset(unknown))


def _element(a: Algebra, x: Sparse) -> Element:
    coords = [ZERO] * a.dim
    for k, c in x.items():
        coords[k] = c
    return a.element(coords)


def _arrangements(ms: tuple[int, ...]) -> list[tuple[int, ...]]:
    return sorted(set(permutations(ms)))


def _expression_rows(a, expr: Expression, ms, central, fixed, layout) -> MapForm:
    form = MapForm(a)
    for args in _arrangements(ms):
        for t in expr.terms:
            if t.coeff:
                _term_into(a, t.coeff, t.factors, args, central, fixed, layout, form)
    return form


def compile_constraints(identity: NormalizedIdentity, a: Algebra, b: Binding) -> ConstraintSystem:
    z = check_binding(identity, a, b)
    unknowns = tuple(s for s in identity.maps if s not in b.fixed)
    layout = MapLayout(unknowns, a.dim)
    central = {name: val.sparse() for name, val in b.central.items()}
    if a.is_unital:
        central[UNIT] = a.one.sparse()
    rows: list[Sparse] = []
    consts: list[Fraction] = []
    for ms in combinations_with_replacement(range(a.dim), identity.degree):
        for diff in identity.differences:
            form = _expression_rows(a, diff, ms, central, b.fixed, layout)
            rows.extend(form.rows)
            consts.extend(form.const)
    core = len(rows)

    d = a.dim
    for s in b.in_center:
        if not a.is_unital:
            raise BindingError("s(1) in Z needs a unital algebra")
        unit = a.one.coords
        for w in z.complement_equations().basis:
            if s in b.fixed:
                img = b.fixed[s](a.one).coords
                rows.append({})
                consts.append(sum((wk * x for wk, x in zip(w, img)), ZERO))
                continue
            off = layout.offset(s)
            row: Sparse = {}
            for k, wk in enumerate(w):
                if wk:
                    for j, uj in enumerate(unit):
                        if uj:
                            row[off + j * d + k] = row.get(off + j * d + k, ZERO) + wk * uj
            rows.append(row)
            consts.append(ZERO)
    for s, t in b.ties:
        for c in range(d * d):
            row = {}
            const = ZERO
            for sym, sign in ((s, ONE), (t, -ONE)):
                if sym in b.fixed:
                    const += sign * b.fixed[sym].vec()[c]
                else:
                    col = layout.offset(sym) + c
                    row[col] = row.get(col, ZERO) + sign
            rows.append({k: v for k, v in row.items() if v})
            consts.append(const)
    return ConstraintSystem(layout, rows, consts, core)


@dataclass
class SolutionSpace:
    layout: MapLayout
    space: Subspace
    particular: tuple[Fraction, ...] | None = None
    fixed: dict[str, LinearMap] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def decoded_basis(self) -> list[dict[str, LinearMap]]:
        return [self.layout.decode(v) for v in self.space.basis]

    def maps(self, vec: Sequence[Fraction]) -> dict[str, LinearMap]:
        """All maps (unknown and fixed) for a point of the space."""
        out = self.layout.decode(vec)
        out.update(self.fixed)
        return out


class InconsistentSystem(ValueError):
    pass


def solve_system(system: ConstraintSystem) -> tuple[Subspace, tuple[Fraction, ...] | None]:
    n = system.n_cols
    hom = RowReducer(n)
    for row in system.rows:
        hom.add(row)
    if system.homogeneous:
        return hom.nullspace(), None
    aug = RowReducer(n + 1)
    for row, k in zip(system.rows, system.constants):
        r = dict(row)
        if k:
            r[n] = k
        aug.add(r)
    if n in aug.pivots():
        raise InconsistentSystem("the identity has no solution with the given fixed maps")
    part = [ZERO] * n
    for p, row in zip(aug.pivots(), aug.dense_rows()):
        part[p] = -row[n]
    return hom.nullspace(), tuple(part)


def solve_identity(identity: NormalizedIdentity, a: Algebra, b: Binding) -> SolutionSpace:
    system = compile_constraints(identity, a, b)
    space, part = solve_system(system)
    return SolutionSpace(system.layout, space, part, dict(b.fixed))


# -- pointwise evaluation ---------------------------------------------------------


def evaluate_expression(
    expr: Expression, X: Element, maps: Mapping[str, LinearMap], central: Mapping[str, Element]
) -> Element:
    a = X.algebra
    total = a.zero
    powers = {0: a.one} if a.is_unital else {}

    def power(k):
        if k not in powers:
            powers[k] = X if k == 1 else power(k - 1) * X
        return powers[k]

    for t in expr.terms:
        if not t.coeff:
            continue
        acc: Element | None = None
        for f in t.factors:
            if isinstance(f, Power):
                val = power(f.k)
            elif isinstance(f, MapApp):
                val = maps[f.name](power(f.k))
            elif f.name == UNIT:
                val = a.one
            else:
                val = central[f.name]
            acc = val if acc is None else acc * val
        if acc is None:
            raise ValueError("cannot evaluate a term with no factors")
        total = total + t.coeff * acc
    return total


def identity_residuals(
    identity: NormalizedIdentity, X: Element, maps: Mapping[str, LinearMap], central: Mapping[str, Element]
) -> list[Element]:
    return [evaluate_expression(d, X, maps, central) for d in identity.differences]


def holds_at(identity, X, maps, central) -> bool:
    return all(r.is_zero() for r in identity_residuals(identity, X, maps, central))


# -- predicted spaces -------------------------------------------------------------


def _check_pair_layout(layout: MapLayout, psi: str, omega: str):
    if set(layout.symbols) != {psi, omega}:
        raise ValueError(f"layout {layout.symbols} does not consist of {psi!r} and {omega!r}")


def predicted_central_pairs(
    a: Algebra, gamma: Element, layout: MapLayout, psi: str = "Psi", omega: str = "Omega"
) -> Subspace:
    """span{(gamma L_c, L_c) : c in Z(a)}."""
    z = center(a)
    if not z.contains(gamma.coords):
        raise ValueError("gamma is not central")
    _check_pair_layout(layout, psi, omega)
    vecs = []
    for cvec in z.basis:
        c = a.element(cvec)
        vecs.append(layout.encode({psi: mult_operator(a, gamma * c), omega: mult_operator(a, c)}))
    return Subspace.span(layout.size, vecs)


def predicted_generalized_space(
    a: Algebra, n: int, layout: MapLayout, psi: str = "Psi", omega: str = "Omega"
) -> Subspace:
    """span of (D/n + L_z, D + L_z) over derivations D and central z."""
    if n < 2:
        raise ValueError("n must exceed 1")
    _check_pair_layout(layout, psi, omega)
    vecs = []
    d = a.dim
    for dvec in derivation_space(a).basis:
        D = LinearMap.from_vec(dvec, d)
        vecs.append(layout.encode({psi: D / n, omega: D}))
    for zvec in center(a).basis:
        L = mult_operator(a, a.element(zvec))
        vecs.append(layout.encode({psi: L, omega: L}))
    return Subspace.span(layout.size, vecs)


def predicted_tied_space(a: Algebra, layout: MapLayout) -> Subspace:
    """span{(L_c, ..., L_c) : c in Z(a)}, every symbol of ``layout`` the same map."""
    vecs = []
    for zvec in center(a).basis:
        L = mult_operator(a, a.element(zvec))
        vecs.append(layout.encode({s: L for s in layout.symbols}))
    return Subspace.span(layout.size, vecs)


# -- verification -----------------------------------------------------------------


@dataclass
class VerificationReport:
    predicates: dict[str, bool]
    pointwise: bool
    samples: int
    comparison: str | None = None
    dim_gap: int | None = None
    witness: dict | None = None

    @property
    def passed(self) -> bool:
        return all(self.predicates.values()) and self.pointwise

    def to_json(self) -> dict:
        out = {name: ("pass" if ok else "fail") for name, ok in self.predicates.items()}
        out["pointwise_identity"] = "pass" if self.pointwise else "fail"
        out["samples"] = self.samples
        if self.comparison is not None:
            out["comparison"] = self.comparison
            out["dim_gap"] = self.dim_gap
        if self.witness:
            out["witness"] = self.witness
        return out


def verify_solution(
    space: SolutionSpace,
    a: Algebra,
    identity: NormalizedIdentity,
    central: Mapping[str, Element],
    checks: Mapping[str, Iterable[str]] | None = None,
    predicted: Subspace | None = None,
    seed: int = DEFAULT_SEED,
    combos: int = 20,
    points: int = 100,
) -> VerificationReport:
    """Classify and re-check sample solutions.

    ``checks`` maps a map symbol to classification flags that every sampled
    solution must carry, e.g. ``{"Omega": ["two_sided_centralizer"]}``.
    """
    rng = random.Random(seed)
    checks = checks or {}
    vectors = [tuple(v) for v in space.space.basis]
    vectors += [random_in(space.space, rng) for _ in range(combos if space.dim else 0)]
    if space.particular is not None:
        vectors = [tuple(p + v for p, v in zip(space.particular, vec)) for vec in vectors] or [space.particular]
    preds = {f"{s}:{flag}": True for s, flags in checks.items() for flag in flags}
    pointwise = True
    witness = None
    for vec in vectors:
        maps = space.maps(vec)
        reports = {s: classify_map(a, maps[s]) for s in checks}
        for s, flags in checks.items():
            for flag in flags:
                if not getattr(reports[s], flag):
                    preds[f"{s}:{flag}"] = False
        if pointwise:
            for _ in range(points):
                X = random_element(a, rng)
                if not holds_at(identity, X, maps, central):
                    pointwise = False
                    witness = {"X": [str(c) for c in X.coords]}
                    break
    report = VerificationReport(preds, pointwise, len(vectors))
    if predicted is not None:
        report.comparison = subspace_compare(space.space, predicted)
        report.dim_gap = predicted.dim - space.dim
    report.witness = witness
    return report


def random_map(a: Algebra, rng: random.Random) -> LinearMap:
    return LinearMap(tuple(tuple(random_rational(rng) for _ in range(a.dim)) for _ in range(a.dim)))
