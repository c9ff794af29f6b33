import random
import warnings

import pytest

from trifi.algebra import center, full_matrix, scalars, validate_algebra
from trifi.linalg import Subspace
from trifi.triangular import (
    Bimodule,
    build_triangular,
    builtin,
    center_by_formula,
    check_faithful,
    matrix_bimodule,
    random_triangular,
    scalar_tri,
    standard_builder,
    upper_triangular,
)


def test_scalar_tri_is_t2():
    t = scalar_tri()
    assert t.dim == 3
    assert t.algebra.one.coords == (1, 0, 1)
    assert center(t.algebra) == Subspace.span(3, [[1, 0, 1]])
    assert t.block_map == {"A": range(0, 1), "M": range(1, 2), "B": range(2, 3)}


def test_scalar_tri_products_match_t2():
    assert scalar_tri().algebra.structure == upper_triangular(2).algebra.structure


def test_zero_bimodule_rejected():
    Q = scalars()
    with pytest.raises(ValueError, match="nonzero"):
        build_triangular(Q, Q, Bimodule(0, [[[]]], [[[]]]))


def test_upper_triangular_k1_rejected():
    with pytest.raises(ValueError):
        upper_triangular(1)


def test_bad_bimodule_rejected():
    Q = scalars()
    with pytest.raises(ValueError, match="bimodule"):
        build_triangular(Q, Q, Bimodule(1, [[[2]]], [[[1]]]))  # 1.m = 2m


def test_unfaithful_warns():
    # M = Q over A = Q x Q with the second factor acting by zero
    Q = scalars()
    from trifi.algebra import direct_sum

    A = direct_sum(Q, Q)
    M = Bimodule(1, [[[1]], [[0]]], [[[1]]])
    with pytest.warns(UserWarning, match="faithful"):
        t = build_triangular(A, Q, M)
    assert check_faithful(t.M, t.A, t.B) == (False, True)


@pytest.mark.parametrize("k, dim", [(2, 3), (3, 6), (4, 10)])
def test_upper_triangular_dims(k, dim):
    t = upper_triangular(k)
    assert t.dim == dim
    assert validate_algebra(t.algebra).ok
    assert t.faithful() == (True, True)
    assert center(t.algebra).dim == 1


def test_matrix_bimodule_shape():
    t = matrix_bimodule(2, 1)
    assert (t.A.dim, t.M.dimM, t.B.dim) == (4, 2, 1)
    assert t.dim == 7
    assert builtin("TriM2x1").algebra.structure == t.algebra.structure


def test_standard_builder():
    assert standard_builder("upper_triangular", 3).dim == 6
    assert standard_builder("full_matrix", 2).dim == 4
    with pytest.raises(ValueError):
        standard_builder("nonsense", 2)


def test_compose_places_blocks():
    t = upper_triangular(2)
    x = t.compose(a=[2], m=[3], b=[5])
    assert x.coords == (2, 3, 5)


@pytest.mark.parametrize("name", ["T2", "T3", "T4", "TriM2x1"])
def test_center_formula_named(name):
    t = builtin(name)
    assert center_by_formula(t) == center(t.algebra)


def test_center_formula_random_instances():
    rng = random.Random(5)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        for _ in range(8):
            t = random_triangular(rng)
            assert t.faithful() == (True, True)
            assert center_by_formula(t) == center(t.algebra)
            assert center(t.algebra).contains(t.algebra.one.coords)


def test_m2_is_not_triangular_builtin():
    assert builtin("M2").dim == full_matrix(2).dim
    with pytest.raises(KeyError):
        builtin("T9")
