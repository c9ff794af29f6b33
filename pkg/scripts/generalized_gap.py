"""How much of {(D/n + L_z, D + L_z)} solves 2 Psi(X^n) = X^{n-1} Omega(X) + Omega(X) X^{n-1}.

For n = 2 the solution space (with Omega(1) central) is the whole predicted
space.  For larger n only part of it survives; this prints the dimensions and
checks which predicted generators are solutions.

    python scripts/generalized_gap.py [--max-n 5] [--algebras T2 T3 TriM2x1]
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass

from trifi.algebra import LinearMap, center, derivation_space, mult_operator
from trifi.constraints import Binding, predicted_generalized_space, solve_identity
from trifi.dsl import parse_identity, standard_identity, validate_identity
from trifi.linalg import subspace_compare
from trifi.triangular import builtin


@dataclass
class GapConfig:
    algebras: tuple[str, ...] = ("T2", "T3", "TriM2x1")
    max_n: int = 5


def run(cfg: GapConfig):
    print(f"{'algebra':8} {'n':>2} {'sol':>4} {'pred':>4} {'gap':>4} {'comparison':14} derivation parts solving / central parts solving")
    for name in cfg.algebras:
        a = builtin(name).algebra
        ders = [LinearMap.from_vec(v, a.dim) for v in derivation_space(a).basis]
        cents = [mult_operator(a, a.element(v)) for v in center(a).basis]
        for n in range(2, cfg.max_n + 1):
            ni = validate_identity(parse_identity(standard_identity("generalized", n)))
            sol = solve_identity(ni, a, Binding(in_center=("Omega",)))
            pred = predicted_generalized_space(a, n, sol.layout)
            d_ok = sum(sol.space.contains(sol.layout.encode({"Psi": D / n, "Omega": D})) for D in ders)
            c_ok = sum(sol.space.contains(sol.layout.encode({"Psi": L, "Omega": L})) for L in cents)
            cmp = subspace_compare(sol.space, pred)
            print(f"{name:8} {n:>2} {sol.dim:>4} {pred.dim:>4} {pred.dim - sol.dim:>4} {cmp:14} "
                  f"{d_ok}/{len(ders)} / {c_ok}/{len(cents)}")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--algebras", nargs="+", default=list(GapConfig.algebras))
    p.add_argument("--max-n", type=int, default=GapConfig.max_n)
    args = p.parse_args()
    run(GapConfig(tuple(args.algebras), args.max_n))


if __name__ == "__main__":
    main()
