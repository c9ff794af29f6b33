import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trifi.algebra import (
    Algebra,
    LinearMap,
    center,
    classify_map,
    commuting_jordan_derivation_space,
    condition_p,
    derivation_space,
    direct_sum,
    full_matrix,
    invert,
    jordan_derivation_space,
    mult_operator,
    multiply,
    scalars,
    validate_algebra,
)
from trifi.linalg import Subspace, subspace_compare
from trifi.pointwise import random_element
from trifi.triangular import builtin, upper_triangular

from oracles import matmul2

T2 = upper_triangular(2).algebra
M2 = full_matrix(2)
e11, e12, e22 = T2.basis_elements()


def test_t2_products():
    assert multiply(T2, e11, e12) == e12
    assert multiply(T2, e12, e11) == T2.zero
    assert e12 * e22 == e12
    assert e12 * e12 == T2.zero


def test_m2_products_match_matrix_multiplication():
    E = M2.basis_elements()
    units = [[[int((r, c) == (i, j)) for c in range(2)] for r in range(2)] for i in range(2) for j in range(2)]
    for x, ux in zip(E, units):
        for y, uy in zip(E, units):
            prod = matmul2(ux, uy)
            assert (x * y).coords == tuple(Fraction(v) for row in prod for v in row)


def test_one_is_identity_matrix():
    assert M2.one.coords == (1, 0, 0, 1)
    assert T2.one.coords == (1, 0, 1)


@pytest.mark.parametrize("name", ["T2", "T3", "M2", "TriM2x1"])
def test_builtins_validate(name):
    inst = builtin(name)
    a = getattr(inst, "algebra", inst)
    assert validate_algebra(a).ok


def test_unit_defect_detected():
    # T2 table with the declared unit shifted to e11 only
    bad = Algebra(T2.dim, T2.structure, [1, 0, 0])
    rep = validate_algebra(bad)
    assert not rep.ok
    assert rep.unit_failures
    assert not rep.associativity_failures


def test_associativity_defect_detected():
    # e0 e0 = e1, otherwise zero except the unit rows, breaks associativity with e0 (e0 e0)
    c = [[[0] * 2 for _ in range(2)] for _ in range(2)]
    c[0][0][1] = 1
    c[0][1][0] = 1
    rep = validate_algebra(Algebra(2, c))
    assert rep.associativity_failures


def test_center_of_t2_is_scalars():
    assert center(T2) == Subspace.span(3, [[1, 0, 1]])


def test_center_of_commutative_algebra_is_everything():
    q2 = direct_sum(scalars(), scalars())
    assert center(q2).dim == 2


def test_invert():
    x = T2.element([2, 3, 5])
    y = invert(T2, x)
    assert y * x == T2.one and x * y == T2.one
    assert invert(T2, e12) is None
    assert invert(T2, e11) is None


def test_mult_operator_columns():
    L = mult_operator(T2, e12, "left")
    assert L.column(0) == (0, 0, 0)
    assert L.column(2) == (0, 1, 0)
    R = mult_operator(T2, e12, "right")
    assert R.column(0) == (0, 1, 0)
    with pytest.raises(ValueError):
        mult_operator(T2, e12, "middle")


def test_condition_p():
    assert condition_p(T2)
    assert condition_p(M2)
    zero_mult = Algebra(2, [[[0, 0], [0, 0]], [[0, 0], [0, 0]]])
    assert not condition_p(zero_mult)


def test_t2_derivation_spaces():
    assert derivation_space(T2).dim == 2
    assert jordan_derivation_space(T2) == derivation_space(T2)
    assert commuting_jordan_derivation_space(T2).dim == 0


def test_classify_identity_map():
    flags = classify_map(T2, LinearMap.identity(3)).flags()
    for name in ("left_centralizer", "right_centralizer", "two_sided_centralizer", "commuting", "two_sided_generalized"):
        assert flags[name]
    assert not flags["derivation"]


def test_classify_inner_derivation():
    D = mult_operator(T2, e12, "left") - mult_operator(T2, e12, "right")
    rep = classify_map(T2, D)
    assert rep.derivation and rep.jordan_derivation
    assert not rep.left_centralizer
    assert rep.two_sided_generalized
    assert rep.l_witness == D


def test_classify_generalized_not_centralizer():
    # F = L_{e11} + ad(e12): l-generalized with witness ad(e12)
    ad = mult_operator(T2, e12, "left") - mult_operator(T2, e12, "right")
    F = mult_operator(T2, e11, "left") + ad
    rep = classify_map(T2, F)
    assert rep.l_generalized
    assert not rep.two_sided_centralizer


def test_classify_dimension_mismatch():
    with pytest.raises(ValueError):
        classify_map(T2, LinearMap.identity(2))


def test_full_matrix_rejects_zero():
    with pytest.raises(ValueError):
        full_matrix(0)


def test_linear_map_vec_roundtrip():
    rng = random.Random(3)
    from trifi.constraints import random_map

    F = random_map(M2, rng)
    assert LinearMap.from_vec(F.vec(), 4) == F


def test_floats_rejected_in_elements():
    with pytest.raises(TypeError):
        T2.element([0.5, 0, 0])


# -- properties ---------------------------------------------------------------

ALGEBRAS = [T2, M2, builtin("T3").algebra, builtin("TriM2x1").algebra]


@given(st.sampled_from(ALGEBRAS), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_central_multipliers_are_two_sided_centralizers(a, seed):
    rng = random.Random(seed)
    z = center(a)
    c = a.element([0] * a.dim)
    for b in z.basis:
        c = c + Fraction(rng.randint(-5, 5)) * a.element(b)
    rep = classify_map(a, mult_operator(a, c))
    assert rep.two_sided_centralizer
    assert rep.jordan_centralizer


@given(st.sampled_from(ALGEBRAS), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_derivations_are_generalized_with_themselves_as_witness(a, seed):
    rng = random.Random(seed)
    basis = derivation_space(a).basis
    vec = [Fraction(0)] * (a.dim ** 2)
    for b in basis:
        k = Fraction(rng.randint(-4, 4))
        vec = [x + k * y for x, y in zip(vec, b)]
    D = LinearMap.from_vec(vec, a.dim)
    rep = classify_map(a, D)
    assert rep.derivation and rep.jordan_derivation
    assert rep.two_sided_generalized
    assert rep.l_witness == D and rep.r_witness == D


@given(st.sampled_from(ALGEBRAS), st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_center_elements_commute_with_random_elements(a, seed):
    rng = random.Random(seed)
    for b in center(a).basis:
        z = a.element(b)
        x = random_element(a, rng)
        assert z * x == x * z
        assert mult_operator(a, z, "left") == mult_operator(a, z, "right")


@given(st.sampled_from(ALGEBRAS), st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_associativity_on_random_elements(a, seed):
    rng = random.Random(seed)
    x, y, z = (random_element(a, rng) for _ in range(3))
    assert (x * y) * z == x * (y * z)
    assert a.one * x == x == x * a.one


def test_jordan_derivation_basis_survives_random_points():
    # a Jordan derivation from the polarized solve satisfies D(x^2) = D(x)x + xD(x) at 200 random x
    rng = random.Random(11)
    for a in (T2, builtin("T3").algebra):
        for b in jordan_derivation_space(a).basis:
            D = LinearMap.from_vec(b, a.dim)
            for _ in range(200):
                x = random_element(a, rng)
                assert D(x * x) == D(x) * x + x * D(x)


def test_commuting_maps_contain_central_multipliers():
    from trifi.algebra import commuting_map_space

    comm = commuting_map_space(T2)
    z = center(T2)
    cm = Subspace.span(9, [mult_operator(T2, T2.element(b)).vec() for b in z.basis])
    assert subspace_compare(cm, comm) in ("equal", "s1_subset_s2")
