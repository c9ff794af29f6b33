"""Pointwise checks: seeded random rationals and polarization by evaluation.

A homogeneous polynomial map q of degree n vanishes identically (over a field
of characteristic 0) iff its full polarization vanishes on every multiset of
n basis vectors.  The polarization is computed from values of q alone::

    sum over subsets S of {1..n} of (-1)^(n - |S|) q(sum_{i in S} a_i) = n! Q(a_1, ..., a_n)

so this check never looks inside q.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Callable, Sequence

from .algebra import Algebra, Element
from .linalg import Subspace

DEFAULT_SEED = 20240601


def random_rational(rng: random.Random, bound: int = 9) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_element(a: Algebra, rng: random.Random) -> Element:
    return a.element(random_rational(rng) for _ in range(a.dim))


def random_in(space: Subspace, rng: random.Random) -> tuple[Fraction, ...]:
    """Random rational combination of the basis of ``space``."""
    out = [Fraction(0)] * space.ambient_dim
    for b in space.basis:
        c = random_rational(rng)
        out = [x + c * y for x, y in zip(out, b)]
    return tuple(out)


@dataclass
class CheckResult:
    passed: bool
    instances: int
    witness: object = None


def polarized_zero(q: Callable[[Element], Element], a: Algebra, degree: int) -> CheckResult:
    """Whether the homogeneous degree-``degree`` map q vanishes on all of ``a``."""
    basis = a.basis_elements()
    count = 0
    cache: dict[tuple[int, ...], Element] = {}

    def value(idx: tuple[int, ...]) -> Element:
        key = tuple(sorted(idx))
        if key not in cache:
            x = a.zero
            for i in key:
                x = x + basis[i]
            cache[key] = q(x)
        return cache[key]

    for ms in combinations_with_replacement(range(a.dim), degree):
        total = a.zero
        for size in range(1, degree + 1):
            sign = 1 if (degree - size) % 2 == 0 else -1
            for sub in combinations(range(degree), size):
                v = value(tuple(ms[i] for i in sub))
                total = total + v if sign > 0 else total - v
        count += 1
        if not total.is_zero():
            # the polarization is a combination of values of q, so one of them is nonzero
            bad = next(k for k in sorted(cache) if not cache[k].is_zero())
            x = a.zero
            for i in bad:
                x = x + basis[i]
            return CheckResult(
                False, count, {"basis_multiset": [a.label(i) for i in ms], "X": [str(c) for c in x.coords]}
            )
    return CheckResult(True, count)


def random_zero(q: Callable[[Element], Element], a: Algebra, rng: random.Random, samples: int) -> CheckResult:
    for s in range(samples):
        x = random_element(a, rng)
        if not q(x).is_zero():
            return CheckResult(False, s + 1, {"X": [str(c) for c in x.coords]})
    return CheckResult(True, samples)


def identically_zero(
    q: Callable[[Element], Element], a: Algebra, degree: int, rng: random.Random, samples: int = 50
) -> CheckResult:
    """Polarized check on basis multisets, then ``samples`` random points."""
    pol = polarized_zero(q, a, degree)
    if not pol.passed:
        return pol
    rnd = random_zero(q, a, rng, samples)
    return CheckResult(rnd.passed, pol.instances + rnd.instances, rnd.witness)


def on_points(q: Callable[[Element], Element], points: Sequence[Element]) -> CheckResult:
    for i, x in enumerate(points):
        if not q(x).is_zero():
            return CheckResult(False, i + 1, {"X": [str(c) for c in x.coords]})
    return CheckResult(True, len(points))
