"""Step-by-step replay of the centralizer / generalized-derivation arguments.

Given a concrete solution (Psi, Omega) of one of the functional identities,
each intermediate equation of the argument is checked exactly: identities in
X via polarization on basis multisets plus random points, equations in a
central C on the center basis, C = 1 and random central elements.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb
from typing import Callable

from .algebra import (
    Algebra,
    Element,
    LinearMap,
    classify_map,
    commuting_jordan_derivation_space,
    condition_p,
    derivation_space,
    is_derivation,
    jordan_derivation_space,
    mult_operator,
    center,
)
from .linalg import determinant, solve, subspace_compare
from .pointwise import DEFAULT_SEED, CheckResult, identically_zero, random_element, random_in
from .triangular import TriangularAlgebra

TAGS = ("thm21", "cor22", "thm25", "cor_final")


# -- the components of (X + C)^n ------------------------------------------------


def component_value(
    kind: str, k: int, X: Element, C: Element, psi: LinearMap, omega: LinearMap, gamma: Element, n: int,
    check_central: bool = True,
) -> Element:
    """Part of degree k in C of the expanded identity at X + C.

    ``phi``:    from Psi(X^n) = gamma X^{n-1} Omega(X)
    ``theta``:  from Psi(X^n) = gamma X Omega(X^{n-1})
    ``lambda``: from 2 Psi(X^n) = X^{n-1} Omega(X) + Omega(X) X^{n-1}
    """
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must lie in 1..{n - 1}")
    a = X.algebra
    if check_central and not center(a).contains(C.coords):
        raise ValueError("C is not central")
    Ck = C ** k
    lead = comb(n, k) * psi(X ** (n - k) * Ck)
    if kind == "phi":
        return (
            lead
            - comb(n - 1, k) * (gamma * Ck * X ** (n - k - 1) * omega(X))
            - comb(n - 1, k - 1) * (gamma * C ** (k - 1) * X ** (n - k) * omega(C))
        )
    if kind == "theta":
        return (
            lead
            - comb(n - 1, k) * (gamma * X * omega(Ck * X ** (n - k - 1)))
            - comb(n - 1, k - 1) * (gamma * C * omega(C ** (k - 1) * X ** (n - k)))
        )
    if kind == "lambda":
        Ckm = C ** (k - 1)
        return (
            2 * lead
            - comb(n - 1, k - 1) * (Ckm * X ** (n - k) * omega(C))
            - comb(n - 1, k - 1) * (Ckm * omega(C) * X ** (n - k))
            - comb(n - 1, k) * (Ck * X ** (n - 1 - k) * omega(X))
            - comb(n - 1, k) * (Ck * omega(X) * X ** (n - 1 - k))
        )
    raise ValueError(f"unknown component kind {kind!r}")


def vandermonde_matrix(n: int) -> list[list[Fraction]]:
    """Rows (j, j^2, ..., j^{n-1}) for j = 1..n-1."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return [[Fraction(j) ** k for k in range(1, n)] for j in range(1, n)]


def vandermonde_check(n: int) -> Fraction:
    det = determinant(vandermonde_matrix(n))
    if det == 0:
        raise ArithmeticError(f"singular coefficient matrix for n = {n}")
    return det


def vandermonde_recover(
    kind: str, n: int, X: Element, C: Element, psi: LinearMap, omega: LinearMap, gamma: Element
) -> tuple[list[Element], list[Element]]:
    """Recover each component at (X, C) from the sums at X, C, 2C, ..., (n-1)C.

    Returns (recovered, direct).  The components are homogeneous of degree k
    in C for any linear maps, so the two lists agree whether or not the maps
    solve the identity.
    """
    a = X.algebra
    ks = range(1, n)
    sums = [sum((component_value(kind, k, X, j * C, psi, omega, gamma, n) for k in ks), a.zero) for j in ks]
    Y = vandermonde_matrix(n)
    recovered_coords = [[None] * a.dim for _ in ks]
    for coord in range(a.dim):
        sol = solve(Y, [s.coords[coord] for s in sums])
        for idx, v in enumerate(sol):
            recovered_coords[idx][coord] = v
    recovered = [a.element(c) for c in recovered_coords]
    direct = [component_value(kind, k, X, C, psi, omega, gamma, n) for k in ks]
    return recovered, direct


# -- traces -----------------------------------------------------------------------


@dataclass
class Step:
    label: str
    instances: int
    passed: bool
    witness: object = None

    def to_json(self) -> dict:
        out = {"label": self.label, "instances_checked": self.instances, "pass": self.passed}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class ProofTrace:
    theorem: str
    steps: list[Step] = field(default_factory=list)
    aborted: bool = False

    @property
    def passed(self) -> bool:
        return not self.aborted and all(s.passed for s in self.steps)

    def step(self, label: str) -> Step:
        return next(s for s in self.steps if s.label == label)

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "pass": self.passed,
            "aborted": self.aborted,
            "steps": [s.to_json() for s in self.steps],
        }


class _Replay:
    def __init__(self, tag, t, n, gamma, psi, omega, seed):
        self.a: Algebra = t.algebra if isinstance(t, TriangularAlgebra) else t
        self.trace = ProofTrace(tag)
        self.n = n
        self.gamma = gamma
        self.psi = psi
        self.omega = omega
        self.rng = random.Random(seed)
        a = self.a
        self.one = a.one
        self.o1 = omega(a.one)
        self.delta = omega - mult_operator(a, self.o1)
        z = center(a)
        named = [("C=1", a.one)]
        named += [(f"C=z{i}", a.element(v)) for i, v in enumerate(z.basis)]
        named += [(f"C=random{i}", a.element(random_in(z, self.rng))) for i in range(3)]
        self.centrals = named
        self.points = a.basis_elements() + [random_element(a, self.rng) for _ in range(50)]

    def record(self, label: str, result: CheckResult) -> bool:
        self.trace.steps.append(Step(label, result.instances, result.passed, result.witness))
        return result.passed

    def identity(self, label: str, q: Callable[[Element], Element], degree: int) -> bool:
        return self.record(label, identically_zero(q, self.a, degree, self.rng))

    def bilinear(self, label: str, q: Callable[[Element, Element], Element]) -> bool:
        a = self.a
        e = a.basis_elements()
        pairs = [(e[i], e[j]) for i, j in product(range(a.dim), repeat=2)]
        pairs += [(random_element(a, self.rng), random_element(a, self.rng)) for _ in range(50)]
        for idx, (x, y) in enumerate(pairs):
            if not q(x, y).is_zero():
                return self.record(label, CheckResult(False, idx + 1, {"X": [str(c) for c in x.coords], "Y": [str(c) for c in y.coords]}))
        return self.record(label, CheckResult(True, len(pairs)))

    def maps_equal(self, label: str, f: LinearMap, g: LinearMap) -> bool:
        diff = f - g
        ok = diff.is_zero()
        return self.record(label, CheckResult(ok, 1, None if ok else {"difference": [[str(x) for x in r] for r in diff.matrix]}))

    def flag(self, label: str, ok: bool) -> bool:
        return self.record(label, CheckResult(ok, 1))

    def components(self, kind: str):
        """Sum of components vanishes, each component vanishes, and back-substitution agrees."""
        n, a = self.n, self.a
        ks = range(1, n)
        total = 0
        sum_ok = each_ok = back_ok = True
        sum_w = each_w = back_w = None
        for cname, C in self.centrals:
            for X in self.points:
                vals = [component_value(kind, k, X, C, self.psi, self.omega, self.gamma, n, check_central=False) for k in ks]
                total += 1
                if sum_ok and not sum(vals, a.zero).is_zero():
                    sum_ok, sum_w = False, {"C": cname, "X": [str(c) for c in X.coords]}
                bad = [k for k, v in zip(ks, vals) if not v.is_zero()]
                if each_ok and bad:
                    each_ok, each_w = False, {"C": cname, "k": bad, "X": [str(c) for c in X.coords]}
        for cname, C in self.centrals[:2]:
            for X in self.points[: a.dim]:
                rec, direct = vandermonde_recover(kind, n, X, C, self.psi, self.omega, self.gamma)
                if back_ok and (rec != direct or any(not r.is_zero() for r in rec)):
                    back_ok, back_w = False, {"C": cname, "X": [str(c) for c in X.coords]}
        symbol = {"phi": "Phi", "theta": "Theta", "lambda": "Lambda"}[kind]
        self.record(f"sum_k {symbol}_k(X,C) = 0", CheckResult(sum_ok, total, sum_w))
        self.record(f"each {symbol}_k(X,C) = 0", CheckResult(each_ok, total, each_w))
        self.record("vandermonde back-substitution", CheckResult(back_ok, 2 * a.dim, back_w))


def _as_pair(solution: dict) -> tuple[LinearMap, LinearMap]:
    psi = solution["Psi"]
    omega = solution.get("Omega", psi)
    return psi, omega


def replay_theorem(
    tag: str, t, n: int, gamma: Element | None, solution: dict[str, LinearMap], seed: int = DEFAULT_SEED
) -> ProofTrace:
    """Check every intermediate equation of the argument for ``tag`` on ``solution``."""
    if tag not in TAGS:
        raise ValueError(f"unknown theorem tag {tag!r}")
    if n < 2:
        raise ValueError("n must exceed 1")
    a = t.algebra if isinstance(t, TriangularAlgebra) else t
    if gamma is None:
        gamma = a.one
    psi, omega = _as_pair(solution)
    r = _Replay(tag, t, n, gamma, psi, omega, seed)
    {"thm21": _thm21, "cor22": _cor22, "thm25": _thm25, "cor_final": _cor_final}[tag](r)
    return r.trace


def _abort(r: _Replay) -> ProofTrace:
    r.trace.aborted = True
    return r.trace


def _thm21(r: _Replay):
    n, g, P, O, D, o1 = r.n, r.gamma, r.psi, r.omega, r.delta, r.o1
    ok = r.identity("Psi(X^n) = g X^{n-1} Omega(X)", lambda X: P(X ** n) - g * X ** (n - 1) * O(X), n)
    ok &= r.identity("Psi(X^n) = g Omega(X) X^{n-1}", lambda X: P(X ** n) - g * O(X) * X ** (n - 1), n)
    if not ok:
        return _abort(r)
    r.components("phi")
    r.identity("Psi(X) = g/n Omega(X) + g(n-1)/n X Omega(1)",
               lambda X: P(X) - Fraction(1, n) * (g * O(X)) - Fraction(n - 1, n) * (g * X * o1), 1)
    r.identity("Psi(X^2) = g/n Omega(X^2) + g(n-1)/n X^2 Omega(1)",
               lambda X: P(X * X) - Fraction(1, n) * (g * O(X * X)) - Fraction(n - 1, n) * (g * X * X * o1), 2)
    r.identity("Psi(X^2) = 2g/n X Omega(X) + g(n-2)/n X^2 Omega(1)",
               lambda X: P(X * X) - Fraction(2, n) * (g * X * O(X)) - Fraction(n - 2, n) * (g * X * X * o1), 2)
    r.identity("Omega(X^2) = 2 X Omega(X) - Omega(1) X^2",
               lambda X: O(X * X) - 2 * (X * O(X)) + o1 * X * X, 2)
    r.identity("Omega(X^2) = 2 Omega(X) X - Omega(1) X^2",
               lambda X: O(X * X) - 2 * (O(X) * X) + o1 * X * X, 2)
    r.identity("Omega(X) X = X Omega(X)", lambda X: O(X) * X - X * O(X), 2)
    r.identity("Delta is a Jordan derivation", lambda X: D(X * X) - D(X) * X - X * D(X), 2)
    r.identity("Delta is commuting", lambda X: D(X) * X - X * D(X), 2)
    r.flag("Delta = 0", D.is_zero())
    r.maps_equal("Omega = L_{Omega(1)}", O, mult_operator(r.a, o1))
    r.maps_equal("Psi = g Omega", P, mult_operator(r.a, g) @ O)
    r.flag("Omega two-sided centralizer", classify_map(r.a, O).two_sided_centralizer)
    r.flag("Psi two-sided centralizer", classify_map(r.a, P).two_sided_centralizer)


def _cor22(r: _Replay):
    n, g, P, O = r.n, r.gamma, r.psi, r.omega
    ok = r.identity("Psi(X^n) = g X Omega(X^{n-1})", lambda X: P(X ** n) - g * X * O(X ** (n - 1)), n)
    ok &= r.identity("Psi(X^n) = g Omega(X^{n-1}) X", lambda X: P(X ** n) - g * O(X ** (n - 1)) * X, n)
    if not ok:
        return _abort(r)
    r.components("theta")
    r.identity("n Psi(X^2) = 2g X Omega(X) + (n-2) g Omega(X^2)",
               lambda X: n * P(X * X) - 2 * (g * X * O(X)) - (n - 2) * (g * O(X * X)), 2)
    r.identity("n Psi(X^2) = 2g Omega(X) X + (n-2) g Omega(X^2)",
               lambda X: n * P(X * X) - 2 * (g * O(X) * X) - (n - 2) * (g * O(X * X)), 2)
    Lg = mult_operator(r.a, g)
    mu = n * P - (n - 2) * (Lg @ O)
    r.identity("mu(X^2) = 2g X Omega(X)", lambda X: mu(X * X) - 2 * (g * X * O(X)), 2)
    r.identity("mu(X^2) = 2g Omega(X) X", lambda X: mu(X * X) - 2 * (g * O(X) * X), 2)
    r.maps_equal("mu = 2g Omega", mu, 2 * (Lg @ O))
    r.maps_equal("Psi = g Omega", P, Lg @ O)
    r.flag("Omega two-sided centralizer", classify_map(r.a, O).two_sided_centralizer)
    r.flag("Psi two-sided centralizer", classify_map(r.a, P).two_sided_centralizer)


def _generalized_base(r: _Replay, P, O) -> bool:
    n = r.n
    return r.identity(
        "2 Psi(X^n) = X^{n-1} Omega(X) + Omega(X) X^{n-1}",
        lambda X: 2 * P(X ** n) - X ** (n - 1) * O(X) - O(X) * X ** (n - 1),
        n,
    )


def _thm25(r: _Replay):
    n, P, O, D, o1 = r.n, r.psi, r.omega, r.delta, r.o1
    if not _generalized_base(r, P, O):
        return _abort(r)
    r.components("lambda")
    r.identity("Psi(X) = Omega(X)/n + (n-1)/n X Omega(1)",
               lambda X: P(X) - O(X) / n - Fraction(n - 1, n) * (X * o1), 1)
    r.identity("Psi(X^2) = Omega(X^2)/n + (n-1)/n X^2 Omega(1)",
               lambda X: P(X * X) - O(X * X) / n - Fraction(n - 1, n) * (X * X * o1), 2)
    r.identity("Psi(X^2) = X Omega(X)/n + Omega(X) X/n + (n-2)/n X^2 Omega(1)",
               lambda X: P(X * X) - (X * O(X)) / n - (O(X) * X) / n - Fraction(n - 2, n) * (X * X * o1), 2)
    r.identity("Omega(X^2) = X Omega(X) + Omega(X) X - Omega(1) X^2",
               lambda X: O(X * X) - X * O(X) - O(X) * X + o1 * X * X, 2)
    r.identity("Delta is a Jordan derivation", lambda X: D(X * X) - D(X) * X - X * D(X), 2)
    r.flag("Delta is a derivation", is_derivation(r.a, D))
    r.bilinear("Omega(XY) = Omega(X) Y + X Delta(Y)", lambda X, Y: O(X * Y) - O(X) * Y - X * D(Y))
    r.bilinear("Omega(XY) = Delta(X) Y + X Omega(Y)", lambda X, Y: O(X * Y) - D(X) * Y - X * O(Y))
    r.maps_equal("Psi = Delta/n + L_{Omega(1)}", P, D / n + mult_operator(r.a, o1))
    r.flag("Omega two-sided generalized derivation", classify_map(r.a, O).two_sided_generalized)
    r.flag("Psi two-sided generalized derivation", classify_map(r.a, P).two_sided_generalized)


def _cor_final(r: _Replay):
    n, P, O, D, o1 = r.n, r.psi, r.omega, r.delta, r.o1
    r.maps_equal("Psi = Omega", P, O)
    if not _generalized_base(r, P, P):
        return _abort(r)
    r.components("lambda")
    r.identity("Psi(X) = Psi(X)/n + (n-1)/n X Psi(1)",
               lambda X: P(X) - P(X) / n - Fraction(n - 1, n) * (X * o1), 1)
    r.maps_equal("Delta + L_{Omega(1)} = Delta/n + L_{Omega(1)}", D + mult_operator(r.a, o1), D / n + mult_operator(r.a, o1))
    r.flag("Delta = 0", D.is_zero())
    r.maps_equal("Psi = L_{Psi(1)}", P, mult_operator(r.a, P(r.a.one)))
    r.flag("Psi two-sided centralizer", classify_map(r.a, P).two_sided_centralizer)


# -- background lemmas -------------------------------------------------------------


@dataclass
class LemmaReport:
    derivation_dim: int
    jordan_derivation_dim: int
    jordan_vs_derivation: str
    commuting_jordan_dim: int
    condition_p: bool

    @property
    def passed(self) -> bool:
        return self.jordan_vs_derivation == "equal" and self.commuting_jordan_dim == 0 and self.condition_p

    def to_json(self) -> dict:
        return {
            "derivation_dim": self.derivation_dim,
            "jordan_derivation_dim": self.jordan_derivation_dim,
            "jordan_derivations_are_derivations": self.jordan_vs_derivation,
            "commuting_jordan_derivation_dim": self.commuting_jordan_dim,
            "condition_p": self.condition_p,
            "pass": self.passed,
        }


def verify_background_lemmas(t) -> LemmaReport:
    """Jordan derivations = derivations; commuting Jordan derivations vanish; Condition (P)."""
    a = t.algebra if isinstance(t, TriangularAlgebra) else t
    der = derivation_space(a)
    jder = jordan_derivation_space(a)
    return LemmaReport(
        derivation_dim=der.dim,
        jordan_derivation_dim=jder.dim,
        jordan_vs_derivation=subspace_compare(jder, der),
        commuting_jordan_dim=commuting_jordan_derivation_space(a).dim,
        condition_p=condition_p(a),
    )
