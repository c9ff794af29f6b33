"""Independent reference computations used by the tests.

None of these go through the polarization compiler or the incremental
eliminator; they are deliberately naive.
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations

from trifi.algebra import Algebra
from trifi.constraints import MapLayout, evaluate_expression
from trifi.linalg import nullspace
from trifi.pointwise import random_element


def cofactor_det(m) -> Fraction:
    n = len(m)
    if n == 1:
        return Fraction(m[0][0])
    total = Fraction(0)
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * Fraction(m[0][j]) * cofactor_det(minor)
    return total


def leibniz_det(m) -> Fraction:
    n = len(m)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        prod = Fraction(1)
        for i in range(n):
            prod *= m[i][perm[i]]
        total += (-1) ** inv * prod
    return total


def vandermonde_product_formula(n: int) -> int:
    fact = 1
    for k in range(1, n):
        fact *= k
    prod = 1
    for i in range(1, n):
        for j in range(i + 1, n):
            prod *= j - i
    return fact * prod


def matmul2(x, y):
    return [[sum(x[i][k] * y[k][j] for k in range(len(y))) for j in range(len(y[0]))] for i in range(len(x))]


def sampled_solution_space(identity, a: Algebra, central, extra_rows=(), points: int | None = None, seed: int = 7):
    """Solution space from pointwise evaluation at random X (no polarization).

    The residual at X is linear in the unknown maps, so evaluating it on each
    unit map gives one block of rows per point.  Every point only removes
    non-solutions, so the result can only shrink toward the true space as
    points are added; enough random points make it exact.
    """
    rng = random.Random(seed)
    layout = MapLayout(tuple(identity.maps), a.dim)
    N = layout.size
    units = []
    for c in range(N):
        vec = [Fraction(0)] * N
        vec[c] = Fraction(1)
        units.append(layout.decode(vec))
    points = points or 2 * N
    rows = []
    for _ in range(points):
        X = random_element(a, rng)
        cols = []
        for maps in units:
            res = [evaluate_expression(d, X, maps, central) for d in identity.differences]
            cols.append([x for r in res for x in r.coords])
        rows.extend([list(r) for r in zip(*cols)])
    rows.extend(extra_rows)
    return layout, nullspace(rows, N)


def center_rows(a: Algebra, layout: MapLayout, symbol: str):
    """Rows forcing symbol(1) to commute with every basis element."""
    N = layout.size
    rows = []
    e = a.basis_elements()
    for i in range(a.dim):
        cols = []
        for c in range(N):
            vec = [Fraction(0)] * N
            vec[c] = Fraction(1)
            f = layout.decode(vec)[symbol]
            u = f(a.one)
            cols.append((e[i] * u - u * e[i]).coords)
        rows.extend([list(r) for r in zip(*cols)])
    return rows


def tie_rows(layout: MapLayout, s: str, t: str):
    d2 = layout.dim ** 2
    rows = []
    for c in range(d2):
        row = [Fraction(0)] * layout.size
        row[layout.offset(s) + c] += 1
        row[layout.offset(t) + c] -= 1
        rows.append(row)
    return rows
