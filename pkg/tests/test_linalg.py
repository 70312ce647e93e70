from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from discrete_wigner.exceptions import (ConditioningError, DegreeError, DimensionError,
                                        SingularityError)
from discrete_wigner.linalg import (PolyMatrix, check_nodes, determinant, elementary_symmetric,
                                    elementary_symmetric_all, gauss_jordan_inverse,
                                    poly_matrix_power, vandermonde_inverse, vandermonde_matrix,
                                    vandermonde_residual)
from discrete_wigner.scalars import EXACT, GaussianRational, float_backend

small_fractions = st.fractions(min_value=-20, max_value=20, max_denominator=9)
node_sets = st.lists(small_fractions, min_size=1, max_size=7, unique=True)


def brute_e(values, r):
    return sum((math.prod(c) for c in itertools.combinations(values, r)), Fraction(0))


@given(st.lists(small_fractions, max_size=7), st.data())
def test_elementary_symmetric_matches_subsets(values, data):
    r = data.draw(st.integers(0, len(values)))
    assert elementary_symmetric(values, r) == brute_e(values, r)
    assert elementary_symmetric_all(values) == [brute_e(values, k) for k in range(len(values) + 1)]


def test_elementary_symmetric_omit_and_errors():
    assert elementary_symmetric([1, 2, 3], 2, omit=0) == 6
    assert elementary_symmetric([], 0) == 1
    with pytest.raises(DegreeError):
        elementary_symmetric([1, 2], 3)
    with pytest.raises(IndexError):
        elementary_symmetric([1, 2], 1, omit=5)


@given(node_sets)
def test_vandermonde_inverse_equals_gauss_jordan(nodes):
    inv = vandermonde_inverse(nodes)
    assert (inv == gauss_jordan_inverse(vandermonde_matrix(nodes))).all()
    assert vandermonde_residual(nodes, inv) == 0


def test_vandermonde_inverse_j1_nodes():
    inv = vandermonde_inverse([-1, 0, 1], EXACT)
    expected = [[0, 1, 0], [Fraction(-1, 2), 0, Fraction(1, 2)], [Fraction(1, 2), -1, Fraction(1, 2)]]
    assert inv.tolist() == expected


def test_vandermonde_float_close_to_exact():
    nodes = [Fraction(k - 4) for k in range(9)]
    exact = np.array(vandermonde_inverse(nodes, EXACT), dtype=float)
    approx = vandermonde_inverse([float(x) for x in nodes], float_backend(1e-10))
    np.testing.assert_allclose(approx, exact, rtol=1e-12, atol=1e-14)


def test_node_checks():
    with pytest.raises(SingularityError):
        check_nodes([Fraction(1), Fraction(1)], EXACT)
    with pytest.raises(ConditioningError):
        check_nodes([0.0, 1e-12], float_backend(1e-10))
    with pytest.raises(DimensionError):
        check_nodes([], EXACT)


def test_float_residual_guard_is_opt_in():
    nodes = [float(k) for k in range(-12, 13)]
    inv = vandermonde_inverse(nodes, float_backend(1e-14))
    assert vandermonde_residual(nodes, inv) > 1e-14
    with pytest.raises(ConditioningError):
        vandermonde_inverse(nodes, float_backend(1e-14), check_residual=True)


def test_gauss_jordan_singular():
    with pytest.raises(SingularityError):
        gauss_jordan_inverse(np.array([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]], dtype=object))


@given(st.lists(st.lists(small_fractions, min_size=3, max_size=3), min_size=3, max_size=3))
def test_determinant_matches_float(rows):
    A = np.array(rows, dtype=object)
    assert float(determinant(A)) == pytest.approx(np.linalg.det(np.array(rows, dtype=float)), abs=1e-6)


def _random_pair(seed, size):
    rng = np.random.default_rng(seed)

    def m():
        return np.array([[GaussianRational(int(rng.integers(-3, 4)), int(rng.integers(-3, 4)))
                          for _ in range(size)] for _ in range(size)], dtype=object)
    return m(), m()


@pytest.mark.parametrize("seed", range(4))
def test_power_is_repeated_product(seed):
    P, Q = _random_pair(seed, 3)
    base = poly_matrix_power(P, Q, 1, EXACT)
    acc = poly_matrix_power(P, Q, 0, EXACT)
    for r in range(1, 5):
        acc = acc @ base
        got = poly_matrix_power(P, Q, r, EXACT)
        assert (got.coeffs == acc.coeffs).all()


@pytest.mark.parametrize("seed", range(3))
def test_power_associativity_and_words(seed):
    P, Q = _random_pair(seed + 10, 3)
    A2, A3 = poly_matrix_power(P, Q, 2, EXACT), poly_matrix_power(P, Q, 3, EXACT)
    assert ((A2 @ A3).coeffs == (A3 @ A2).coeffs).all()
    # coefficient of λ^a μ^b is the sum of all words with a P's and b Q's
    for a in range(4):
        words = np.full((3, 3), GaussianRational(), dtype=object)
        for slots in itertools.combinations(range(3), a):
            w = np.eye(3, dtype=int).astype(object)
            for pos in range(3):
                w = w @ (P if pos in slots else Q)
            words = words + w
        assert (A3.coefficient(a, 3 - a) == words).all()


def test_homogeneity_of_entries():
    P, Q = _random_pair(99, 2)
    A = poly_matrix_power(P, Q, 4, EXACT)
    assert all(a + b == 4 for i in range(2) for k in range(2) for (a, b) in A.entry(i, k))
    assert not A.coefficient(1, 1).any()


def test_float_power_matches_exact():
    P, Q = _random_pair(5, 3)
    exact = poly_matrix_power(P, Q, 5, EXACT)
    approx = poly_matrix_power(P.astype(complex), Q.astype(complex), 5, float_backend())
    np.testing.assert_allclose(approx.coeffs, exact.coeffs.astype(complex), atol=1e-9)


def test_polymatrix_shape_checks():
    with pytest.raises(DimensionError):
        PolyMatrix(2, np.zeros((2, 3, 3)))
    with pytest.raises(DegreeError):
        poly_matrix_power([[1]], [[1]], -1)
