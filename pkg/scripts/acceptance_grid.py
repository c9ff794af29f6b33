"""Solve the standard identities over the algebra x n x gamma grid.

One row per instance: solution dimension, predicted dimension, comparison
and wall time.  Usage::

    python scripts/acceptance_grid.py [--algebras T2 T3] [--ns 2 3 4] [--gammas 1 2]
"""
from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from trifi.constraints import (
    Binding,
    predicted_central_pairs,
    predicted_generalized_space,
    predicted_tied_space,
    solve_identity,
)
from trifi.dsl import parse_identity, standard_identity, validate_identity
from trifi.linalg import subspace_compare
from trifi.triangular import builtin


@dataclass
class GridConfig:
    algebras: tuple[str, ...] = ("T2", "T3", "TriM2x1")
    ns: tuple[int, ...] = (2, 3, 4)
    gammas: tuple[int, ...] = (1, 2)


def instances(cfg: GridConfig):
    for name in cfg.algebras:
        a = builtin(name).algebra
        for n in cfg.ns:
            for g in cfg.gammas:
                gamma = g * a.one
                for shape in ("centralizer_chain", "inner_chain"):
                    yield name, n, g, shape, a, Binding({"g": gamma}, in_center=("Omega",)), (
                        lambda lay, a=a, gamma=gamma: predicted_central_pairs(a, gamma, lay)
                    )
            yield name, n, "-", "generalized", a, Binding(in_center=("Omega",)), (
                lambda lay, a=a, n=n: predicted_generalized_space(a, n, lay)
            )
            yield name, n, "-", "generalized+tie", a, Binding(in_center=("Omega",), ties=(("Psi", "Omega"),)), (
                lambda lay, a=a: predicted_tied_space(a, lay)
            )


def run(cfg: GridConfig):
    header = f"{'algebra':8} {'n':>2} {'g':>2} {'identity':18} {'dim':>4} {'pred':>4} {'comparison':14} {'sec':>6}"
    print(header)
    print("-" * len(header))
    for name, n, g, shape, a, binding, predict in instances(cfg):
        start = time.perf_counter()
        ni = validate_identity(parse_identity(standard_identity(shape.split("+")[0], n)))
        sol = solve_identity(ni, a, binding)
        pred = predict(sol.layout)
        cmp = subspace_compare(sol.space, pred)
        secs = time.perf_counter() - start
        print(f"{name:8} {n:>2} {g:>2} {shape:18} {sol.dim:>4} {pred.dim:>4} {cmp:14} {secs:6.2f}")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--algebras", nargs="+", default=list(GridConfig.algebras))
    p.add_argument("--ns", nargs="+", type=int, default=list(GridConfig.ns))
    p.add_argument("--gammas", nargs="+", type=int, default=list(GridConfig.gammas))
    args = p.parse_args()
    run(GridConfig(tuple(args.algebras), tuple(args.ns), tuple(args.gammas)))


if __name__ == "__main__":
    main()
