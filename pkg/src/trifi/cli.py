"""Command line interface.

Exit status: 0 success, 1 a verification failed (the report is still
written), 2 bad input.
"""
from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from .algebra import Algebra, Element, LinearMap, center, classify_map, condition_p, derivation_space, jordan_derivation_space, validate_algebra
from .constraints import (
    Binding,
    InconsistentSystem,
    predicted_central_pairs,
    predicted_generalized_space,
    predicted_tied_space,
    solve_identity,
    verify_solution,
    evaluate_expression,
)
from .dsl import format_identity, parse_identity, standard_identity, validate_identity
from .linalg import Subspace, subspace_compare
from .pointwise import DEFAULT_SEED, identically_zero
from .replay import TAGS, replay_theorem, verify_background_lemmas
from .serialize import (
    DocumentError,
    algebra_to_json,
    dumps,
    fingerprint,
    load_algebra_document,
    load_json,
    map_from_json,
    map_to_json,
    parse_rat,
    rat,
    triangular_to_json,
)
from .triangular import BUILTIN_NAMES, TriangularAlgebra, builtin, center_by_formula, standard_builder


class InputError(Exception):
    pass


REPLAY_SHAPES = {
    "thm21": "centralizer_chain",
    "cor22": "inner_chain",
    "thm25": "generalized",
    "cor_final": "generalized",
}


def resolve_algebra(spec: str) -> Algebra | TriangularAlgebra:
    if spec in BUILTIN_NAMES:
        return builtin(spec)
    path = Path(spec)
    if not path.exists():
        raise InputError(f"unknown algebra {spec!r} (not a builtin name {', '.join(BUILTIN_NAMES)} or a file)")
    return load_algebra_document(load_json(path))


def _plain(t) -> Algebra:
    return t.algebra if isinstance(t, TriangularAlgebra) else t


def parse_element(a: Algebra, spec: str) -> Element:
    """"2" or "1/2" means that multiple of the unit; "1,0,1" gives coordinates."""
    parts = [p.strip() for p in spec.split(",")]
    try:
        vals = [parse_rat(p) for p in parts]
    except DocumentError as exc:
        raise InputError(str(exc)) from exc
    if len(vals) == 1:
        return vals[0] * a.one
    if len(vals) != a.dim:
        raise InputError(f"element {spec!r} has {len(vals)} coordinates, algebra has dimension {a.dim}")
    return a.element(vals)


def _assignments(items: list[str] | None, what: str) -> list[tuple[str, str]]:
    out = []
    for item in items or []:
        if "=" not in item:
            raise InputError(f"{what} must look like NAME=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        out.append((k.strip(), v.strip()))
    return out


def _constraint(text: str) -> str:
    # "Omega(1) in Z"
    body = text.replace(" ", "")
    if not body.endswith("(1)inZ") or "(" not in body:
        raise InputError(f"side constraint must look like 'Omega(1) in Z', got {text!r}")
    return body[: body.index("(")]


def _write(doc, out: str | None):
    text = dumps(doc)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _require_theorem_algebra(t) -> TriangularAlgebra:
    if not isinstance(t, TriangularAlgebra):
        raise InputError("this command needs a triangular algebra")
    if t.faithful() != (True, True):
        raise InputError("the bimodule of this triangular algebra is not faithful")
    return t


def _subspace_json(s: Subspace) -> list[list[str]]:
    return [[rat(x) for x in v] for v in s.basis]


# -- commands ---------------------------------------------------------------------


def cmd_algebra_build(args) -> int:
    if args.kind:
        if args.kind not in BUILTIN_NAMES:
            raise InputError(f"unknown builtin {args.kind!r}")
        t = builtin(args.kind)
    elif args.builder:
        try:
            t = standard_builder(args.builder, *args.size)
        except (TypeError, ValueError) as exc:
            raise InputError(str(exc)) from exc
    elif args.spec:
        t = resolve_algebra(args.spec)
    else:
        raise InputError("give --kind, --builder or --spec")
    a = _plain(t)
    rep = validate_algebra(a)
    doc = algebra_to_json(a)
    if isinstance(t, TriangularAlgebra):
        doc["components"] = triangular_to_json(t)
    doc["fingerprint"] = fingerprint(a)
    doc["validation"] = {
        "ok": rep.ok,
        "unital": rep.unital,
        "associativity_failures": [list(x) for x in rep.associativity_failures],
        "unit_failures": rep.unit_failures,
    }
    _write(doc, args.out)
    return 0 if rep.ok else 1


def cmd_algebra_info(args) -> int:
    t = resolve_algebra(args.algebra)
    a = _plain(t)
    rep = validate_algebra(a)
    z = center(a)
    doc = {
        "fingerprint": fingerprint(a),
        "dim": a.dim,
        "labels": list(a.labels) if a.labels else None,
        "valid": rep.ok,
        "center": {"dim": z.dim, "basis": _subspace_json(z)},
        "condition_p": condition_p(a),
        "derivation_dim": derivation_space(a).dim,
        "jordan_derivation_dim": jordan_derivation_space(a).dim,
    }
    ok = rep.ok
    if isinstance(t, TriangularAlgebra):
        zf = center_by_formula(t)
        left, right = t.faithful()
        cmp = subspace_compare(zf, z)
        doc["triangular"] = {
            "blocks": {k: [r.start, r.stop] for k, r in t.block_map.items()},
            "faithful": {"left": left, "right": right},
            "center_by_formula": {"dim": zf.dim, "basis": _subspace_json(zf)},
            "center_comparison": cmp,
        }
        ok = ok and (cmp == "equal" or not (left and right))
    _write(doc, args.out)
    return 0 if ok else 1


def _identity_text(args) -> str:
    if args.text:
        return args.text
    if args.file:
        return Path(args.file).read_text().strip()
    if args.shape:
        if args.n is None:
            raise InputError("--shape needs --n")
        return standard_identity(args.shape, args.n)
    raise InputError("give --text, --file or --shape")


def _load_identity(args):
    text = _identity_text(args)
    ident = validate_identity(parse_identity(text))
    if args.n is not None and args.n != ident.degree:
        raise InputError(f"--n {args.n} does not match the identity degree {ident.degree}")
    return ident


def _central_values(a: Algebra, args) -> dict[str, Element]:
    vals = {k: parse_element(a, v) for k, v in _assignments(args.central, "--central")}
    if getattr(args, "gamma", None) is not None:
        vals.setdefault("g", parse_element(a, args.gamma))
    return vals


def _map_files(items) -> dict[str, LinearMap]:
    return {k: map_from_json(load_json(v)) for k, v in _assignments(items, "--map")}


def cmd_identity_solve(args) -> int:
    t = resolve_algebra(args.algebra)
    a = _plain(t)
    ident = _load_identity(args)
    central = _central_values(a, args)
    binding = Binding(
        central=central,
        fixed=_map_files(args.fixed),
        in_center=tuple(_constraint(c) for c in args.constrain or []),
        ties=tuple(tuple(p) for p in _assignments(args.tie, "--tie")),
    )
    try:
        space = solve_identity(ident, a, binding)
    except InconsistentSystem as exc:
        _write({"identity": format_identity(ident.ast), "algebra": fingerprint(a), "n": ident.degree,
                "consistent": False, "reason": str(exc)}, args.out)
        return 1
    predicted = None
    if args.predict:
        layout = space.layout
        if args.predict == "central":
            predicted = predicted_central_pairs(a, central.get("g", a.one), layout)
        elif args.predict == "generalized":
            predicted = predicted_generalized_space(a, ident.degree, layout)
        else:
            predicted = predicted_tied_space(a, layout)
    checks: dict[str, list[str]] = {}
    for item in args.check or []:
        sym, _, flag = item.partition(":")
        checks.setdefault(sym, []).append(flag)
    report = verify_solution(space, a, ident, central, checks, predicted, seed=args.seed)
    doc = {
        "identity": format_identity(ident.ast),
        "algebra": fingerprint(a),
        "n": ident.degree,
        "gamma": [rat(x) for x in central["g"].coords] if "g" in central else None,
        "central": {k: [rat(x) for x in v.coords] for k, v in central.items()},
        "side_constraints": [f"{s}(1) in Z" for s in binding.in_center] + [f"{s} = {u}" for s, u in binding.ties],
        "unknowns": list(space.layout.symbols),
        "dim": space.dim,
        "basis": [{s: map_to_json(m)["matrix"] for s, m in sol.items()} for sol in space.decoded_basis],
        "verification": report.to_json(),
    }
    if space.particular is not None:
        doc["particular"] = {s: map_to_json(m)["matrix"] for s, m in space.layout.decode(space.particular).items()}
    _write(doc, args.out)
    ok = report.passed and report.comparison in (None, "equal", "s1_subset_s2")
    return 0 if ok else 1


def cmd_identity_verify(args) -> int:
    t = resolve_algebra(args.algebra)
    a = _plain(t)
    ident = _load_identity(args)
    central = _central_values(a, args)
    maps = _map_files(args.map)
    missing = [s for s in ident.maps if s not in maps]
    if missing:
        raise InputError(f"no map given for {', '.join(missing)}")
    rng = random.Random(args.seed)
    results = []
    for i, diff in enumerate(ident.differences):
        res = identically_zero(lambda X: evaluate_expression(diff, X, maps, central), a, ident.degree, rng, samples=100)
        results.append({"difference": i + 1, "pass": res.passed, "instances_checked": res.instances, "witness": res.witness})
    ok = all(r["pass"] for r in results)
    _write({"identity": format_identity(ident.ast), "algebra": fingerprint(a), "n": ident.degree, "pass": ok, "checks": results}, args.out)
    return 0 if ok else 1


def cmd_map_classify(args) -> int:
    t = resolve_algebra(args.algebra)
    a = _plain(t)
    f = map_from_json(load_json(args.map))
    rep = classify_map(a, f)
    doc = {"algebra": fingerprint(a), "flags": rep.flags()}
    if rep.l_witness is not None:
        doc["l_witness"] = map_to_json(rep.l_witness)["matrix"]
    if rep.r_witness is not None:
        doc["r_witness"] = map_to_json(rep.r_witness)["matrix"]
    _write(doc, args.out)
    return 0


def cmd_replay(args) -> int:
    tag = args.theorem.replace("-", "_")
    t = _require_theorem_algebra(resolve_algebra(args.algebra))
    a = t.algebra
    gamma = parse_element(a, args.gamma) if args.gamma else a.one
    if args.solution:
        doc = load_json(args.solution)
        if not isinstance(doc, dict) or "Psi" not in doc:
            raise InputError("a solution file needs at least a 'Psi' map")
        solutions = [{k: map_from_json(v) for k, v in doc.items()}]
    else:
        ident = validate_identity(parse_identity(standard_identity(REPLAY_SHAPES[tag], args.n)))
        uses_gamma = tag in ("thm21", "cor22")
        binding = Binding(
            central={"g": gamma} if uses_gamma else {},
            in_center=("Omega",),
            ties=(("Psi", "Omega"),) if tag == "cor_final" else (),
        )
        solutions = solve_identity(ident, a, binding).decoded_basis
    traces = [replay_theorem(tag, t, args.n, gamma, sol, seed=args.seed) for sol in solutions]
    ok = all(tr.passed for tr in traces)
    doc = {
        "theorem": tag,
        "algebra": fingerprint(a),
        "n": args.n,
        "gamma": [rat(x) for x in gamma.coords],
        "pass": ok,
        "traces": [tr.to_json() for tr in traces],
    }
    _write(doc, args.out)
    return 0 if ok else 1


def cmd_lemmas(args) -> int:
    t = _require_theorem_algebra(resolve_algebra(args.algebra))
    rep = verify_background_lemmas(t)
    doc = {"algebra": fingerprint(t.algebra), **rep.to_json()}
    _write(doc, args.out)
    return 0 if rep.passed else 1


# -- parser -----------------------------------------------------------------------


def _identity_args(p: argparse.ArgumentParser):
    p.add_argument("--algebra", required=True, help=f"builtin ({', '.join(BUILTIN_NAMES)}) or JSON file")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--text", help="identity, e.g. 'Psi(X^2) = g*X*Omega(X)'")
    src.add_argument("--file", help="file holding the identity text")
    src.add_argument("--shape", choices=["centralizer_chain", "inner_chain", "generalized", "generalized_single"])
    p.add_argument("--n", type=int, help="degree (checked against the identity)")
    p.add_argument("--central", action="append", metavar="NAME=VALUE", help="bind a central symbol")
    p.add_argument("--gamma", help="value for the central symbol g")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trifi", description="Functional identities on triangular algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    alg = sub.add_parser("algebra").add_subparsers(dest="action", required=True)
    p = alg.add_parser("build", help="build an algebra and validate it")
    p.add_argument("--kind", help=f"builtin name ({', '.join(BUILTIN_NAMES)})")
    p.add_argument("--builder", choices=["upper_triangular", "full_matrix", "matrix_bimodule"])
    p.add_argument("--size", type=int, nargs="+", default=[], help="builder sizes (k, or p q)")
    p.add_argument("--spec", help="triangular spec or algebra JSON file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_algebra_build)
    p = alg.add_parser("info", help="center, Condition (P), faithfulness, derivation dimensions")
    p.add_argument("--algebra", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_algebra_info)

    ident = sub.add_parser("identity").add_subparsers(dest="action", required=True)
    p = ident.add_parser("solve", help="all linear maps satisfying an identity")
    _identity_args(p)
    p.add_argument("--constrain", action="append", metavar="'S(1) in Z'")
    p.add_argument("--tie", action="append", metavar="S=T")
    p.add_argument("--fixed", action="append", metavar="NAME=FILE", help="fix a map to a JSON map file")
    p.add_argument("--predict", choices=["central", "generalized", "tied"])
    p.add_argument("--check", action="append", metavar="SYMBOL:FLAG", help="classification flag every solution must have")
    p.set_defaults(func=cmd_identity_solve)
    p = ident.add_parser("verify", help="check given maps against an identity")
    _identity_args(p)
    p.add_argument("--map", action="append", metavar="NAME=FILE", required=True)
    p.set_defaults(func=cmd_identity_verify)

    mp = sub.add_parser("map").add_subparsers(dest="action", required=True)
    p = mp.add_parser("classify", help="centralizer / derivation classification of a map")
    p.add_argument("--algebra", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_map_classify)

    p = sub.add_parser("replay", help="replay the intermediate equations of an argument")
    p.add_argument("theorem", choices=list(TAGS) + ["cor-final"])
    p.add_argument("--algebra", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gamma")
    p.add_argument("--solution", help="JSON {Psi: map, Omega: map}; default: every basis solution")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("lemmas", help="check the background facts on an algebra")
    p.add_argument("--algebra", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_lemmas)
    return parser


# the domain errors all subclass ValueError; OSError covers unreadable files
INPUT_ERRORS = (InputError, ValueError, OSError)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
