import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trifi.algebra import LinearMap, center, classify_map, derivation_space, mult_operator
from trifi.constraints import (
    Binding,
    BindingError,
    InconsistentSystem,
    MapLayout,
    compile_constraints,
    holds_at,
    predicted_central_pairs,
    predicted_generalized_space,
    predicted_tied_space,
    random_map,
    solve_identity,
    verify_solution,
)
from trifi.dsl import parse_identity, standard_identity, validate_identity
from trifi.linalg import Subspace, subspace_compare
from trifi.pointwise import random_element, random_in
from trifi.triangular import builtin, upper_triangular

from oracles import center_rows, sampled_solution_space, tie_rows

T2 = upper_triangular(2).algebra
ONE = T2.one


def ident(shape, n):
    return validate_identity(parse_identity(standard_identity(shape, n)))


def central_binding(a, g=1):
    return Binding(central={"g": g * a.one}, in_center=("Omega",))


def test_t2_n2_row_count():
    sys = compile_constraints(ident("centralizer_chain", 2), T2, central_binding(T2))
    # 2 differences x 6 index pairs x 3 coordinates, then the annihilator of Z(T2)
    assert sys.core_rows == 36
    assert sys.n_rows == 36 + 2
    assert sys.n_cols == 18
    assert sys.homogeneous


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("shape", ["centralizer_chain", "inner_chain"])
def test_central_pairs_on_t2(shape, n):
    ni = ident(shape, n)
    sol = solve_identity(ni, T2, central_binding(T2))
    assert sol.dim == 1
    pred = predicted_central_pairs(T2, ONE, sol.layout)
    assert subspace_compare(sol.space, pred) == "equal"


def test_identity_pair_spans_t2_solution():
    sol = solve_identity(ident("centralizer_chain", 3), T2, central_binding(T2))
    vec = sol.layout.encode({"Psi": LinearMap.identity(3), "Omega": LinearMap.identity(3)})
    assert sol.space.contains(vec)


@pytest.mark.parametrize("shape, n", [("centralizer_chain", 2), ("generalized", 2), ("generalized", 3)])
def test_solution_matches_sampling_oracle(shape, n):
    ni = ident(shape, n)
    central = {"g": ONE}
    binding = Binding(central=central, in_center=("Omega",))
    sol = solve_identity(ni, T2, binding)
    layout = MapLayout(ni.maps, T2.dim)
    _, oracle = sampled_solution_space(ni, T2, central, center_rows(T2, layout, "Omega"))
    assert subspace_compare(sol.space, oracle) == "equal"


def test_unconstrained_solve_matches_oracle_on_t3():
    ni = ident("generalized", 2)
    a = builtin("T3").algebra
    sol = solve_identity(ni, a, Binding())
    _, oracle = sampled_solution_space(ni, a, {})
    assert subspace_compare(sol.space, oracle) == "equal"


def test_generalized_n2_equal_predicted_dim3():
    sol = solve_identity(ident("generalized", 2), T2, Binding(in_center=("Omega",)))
    pred = predicted_generalized_space(T2, 2, sol.layout)
    assert pred.dim == derivation_space(T2).dim + center(T2).dim == 3
    assert subspace_compare(sol.space, pred) == "equal"


def test_generalized_n3_contained_in_predicted():
    sol = solve_identity(ident("generalized", 3), T2, Binding(in_center=("Omega",)))
    pred = predicted_generalized_space(T2, 3, sol.layout)
    assert subspace_compare(sol.space, pred) in ("equal", "s1_subset_s2")
    assert sol.dim == 1 and pred.dim == 3


def test_tied_collapse():
    ni = ident("generalized", 3)
    sol = solve_identity(ni, T2, Binding(in_center=("Omega",), ties=(("Psi", "Omega"),)))
    assert subspace_compare(sol.space, predicted_tied_space(T2, sol.layout)) == "equal"
    layout = MapLayout(ni.maps, T2.dim)
    _, oracle = sampled_solution_space(ni, T2, {}, center_rows(T2, layout, "Omega") + tie_rows(layout, "Psi", "Omega"))
    assert sol.space == oracle


def test_single_map_identity():
    ni = ident("generalized_single", 2)
    sol = solve_identity(ni, T2, Binding(in_center=("Psi",)))
    assert subspace_compare(sol.space, predicted_tied_space(T2, sol.layout)) == "equal"


def test_jordan_centralizers_of_t2():
    ni = validate_identity(parse_identity("T(X^2) = T(X)*X = X*T(X)"))
    sol = solve_identity(ni, T2, Binding())
    assert sol.dim == 1
    for maps in sol.decoded_basis:
        assert classify_map(T2, maps["T"]).two_sided_centralizer


def test_fixed_map_affine():
    # fixing Omega = L_2 leaves exactly Psi = L_2 for the centralizer chain
    ni = ident("centralizer_chain", 2)
    L2 = mult_operator(T2, 2 * ONE)
    sol = solve_identity(ni, T2, Binding(central={"g": ONE}, fixed={"Omega": L2}))
    assert sol.dim == 0
    assert sol.maps(sol.particular)["Psi"] == L2


def test_fixed_map_inconsistent():
    ni = ident("centralizer_chain", 2)
    e12 = T2.basis(1)
    ad = mult_operator(T2, e12, "left") - mult_operator(T2, e12, "right")
    with pytest.raises(InconsistentSystem):
        solve_identity(ni, T2, Binding(central={"g": ONE}, fixed={"Omega": ad}))


def test_binding_errors():
    ni = ident("centralizer_chain", 2)
    with pytest.raises(BindingError, match="not bound"):
        solve_identity(ni, T2, Binding())
    with pytest.raises(BindingError, match="not central"):
        solve_identity(ni, T2, Binding(central={"g": T2.basis(0)}))
    with pytest.raises(BindingError, match="invertible"):
        solve_identity(ni, T2, Binding(central={"g": T2.zero}))
    with pytest.raises(BindingError, match="unknown map"):
        solve_identity(ni, T2, Binding(central={"g": ONE}, in_center=("Theta",)))


def test_predicted_rejects_noncentral_gamma():
    layout = MapLayout(("Psi", "Omega"), 3)
    with pytest.raises(ValueError):
        predicted_central_pairs(T2, T2.basis(0), layout)


def test_verify_solution_report():
    ni = ident("centralizer_chain", 2)
    sol = solve_identity(ni, T2, central_binding(T2))
    pred = predicted_central_pairs(T2, ONE, sol.layout)
    rep = verify_solution(
        sol, T2, ni, {"g": ONE}, {"Psi": ["two_sided_centralizer"], "Omega": ["two_sided_centralizer"]}, pred
    )
    assert rep.passed
    out = rep.to_json()
    assert out["Omega:two_sided_centralizer"] == "pass"
    assert out["comparison"] == "equal" and out["dim_gap"] == 0


def test_verify_solution_detects_failure():
    # asking for 'derivation' on central multipliers must fail
    ni = ident("centralizer_chain", 2)
    sol = solve_identity(ni, T2, central_binding(T2))
    rep = verify_solution(sol, T2, ni, {"g": ONE}, {"Omega": ["derivation"]})
    assert not rep.passed


# -- properties ---------------------------------------------------------------

INSTANCES = {"T2": T2, "T3": builtin("T3").algebra}


@given(st.sampled_from(["T2", "T3"]), st.sampled_from([2, 3]), st.integers(0, 10**6))
@settings(max_examples=12, deadline=None)
def test_soundness_random_solutions_hold_pointwise(name, n, seed):
    a = INSTANCES[name]
    rng = random.Random(seed)
    ni = ident("generalized", n)
    sol = solve_identity(ni, a, Binding(in_center=("Omega",)))
    maps = sol.maps(random_in(sol.space, rng))
    for _ in range(20):
        assert holds_at(ni, random_element(a, rng), maps, {})
    assert center(a).contains(maps["Omega"](a.one).coords)


@given(st.integers(0, 10**6))
@settings(max_examples=10, deadline=None)
def test_predicted_generators_satisfy_identity(seed):
    rng = random.Random(seed)
    n = rng.choice([2, 3, 4])
    ni = ident("centralizer_chain", n)
    g = ONE * Fraction(rng.choice([1, 2, -3]))
    layout = MapLayout(ni.maps, 3)
    for vec in predicted_central_pairs(T2, g, layout).basis:
        maps = layout.decode(vec)
        for _ in range(10):
            assert holds_at(ni, random_element(T2, rng), maps, {"g": g})


@given(st.sampled_from([2, 3, 4]), st.sampled_from([1, 2, -1, Fraction(1, 3)]))
@settings(max_examples=10, deadline=None)
def test_gamma_scaling(n, k):
    ni = ident("centralizer_chain", n)
    base = solve_identity(ni, T2, central_binding(T2, 1))
    scaled = solve_identity(ni, T2, central_binding(T2, k))
    p = ni.maps.index("Psi")
    d2 = 9
    mapped = []
    for v in base.space.basis:
        w = list(v)
        w[p * d2:(p + 1) * d2] = [k * x for x in v[p * d2:(p + 1) * d2]]
        mapped.append(w)
    assert Subspace.span(base.layout.size, mapped) == scaled.space


@given(st.sampled_from([2, 3, 4]))
@settings(max_examples=3, deadline=None)
def test_inner_chain_matches_centralizer_chain(n):
    a = builtin("T3").algebra
    s1 = solve_identity(ident("centralizer_chain", n), a, central_binding(a))
    s2 = solve_identity(ident("inner_chain", n), a, central_binding(a))
    assert s1.layout == s2.layout
    assert s1.space == s2.space


@given(st.integers(0, 10**6))
@settings(max_examples=25)
def test_layout_encode_decode(seed):
    rng = random.Random(seed)
    layout = MapLayout(("Psi", "Omega"), 3)
    maps = {"Psi": random_map(T2, rng), "Omega": random_map(T2, rng)}
    assert layout.decode(layout.encode(maps)) == maps
