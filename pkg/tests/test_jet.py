import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sdwave.jet import (Jet, jet_add, jet_const, jet_derivative_at_zero, jet_div, jet_mul, jet_sin_cos,
                        jet_sqrt, jet_var)

coef = st.floats(-3, 3, allow_nan=False)


def J(*c):
    return Jet(np.array(c, dtype=float))


def jets(K, positive=False):
    head = st.floats(0.2, 5) if positive else coef
    return st.tuples(head, st.lists(coef, min_size=K, max_size=K)).map(lambda p: J(p[0], *p[1]))


@pytest.mark.parametrize("c,K,want", [(1, 2, [1, 0, 0]), (0, 0, [0]), (-3.5, 1, [-3.5, 0])])
def test_const(c, K, want):
    assert jet_const(c, K).coeffs.tolist() == want


def test_var():
    assert jet_var(2).coeffs.tolist() == [0, 1, 0]
    assert jet_var(1).coeffs.tolist() == [0, 1]
    assert jet_mul(jet_var(3), jet_var(3)).coeffs.tolist() == [0, 0, 1, 0]
    with pytest.raises(ValueError):
        jet_var(0)


def test_arithmetic_examples():
    assert np.allclose(jet_mul(J(1, 1, 0), J(1, -1, 0)).coeffs, [1, 0, -1])
    assert np.allclose(jet_div(J(1, 0, 0), J(1, 1, 0)).coeffs, [1, -1, 1])
    assert np.allclose(jet_add(J(0, 1), J(2, 3)).coeffs, [2, 4])


def test_errors():
    with pytest.raises(ZeroDivisionError):
        jet_div(J(1, 0), J(0, 1))
    with pytest.raises(ValueError):
        jet_sqrt(J(0, 1))
    with pytest.raises(ValueError):
        jet_sqrt(J(-1, 0))
    with pytest.raises(ValueError):
        jet_add(J(1, 0), J(1, 0, 0))
    with pytest.raises(ValueError):
        jet_derivative_at_zero(J(1, 2), 2)
    with pytest.raises(ValueError):
        jet_const(float("nan"), 2)
    with pytest.raises(ValueError):
        jet_const(1.0, -1)


def test_sqrt_examples():
    assert np.allclose(jet_sqrt(J(4, 0, -1)).coeffs, [2, 0, -0.25])
    assert np.allclose(jet_sqrt(J(1, 0)).coeffs, [1, 0])
    assert np.allclose(jet_sqrt(J(9, 6, 1)).coeffs, [3, 1, 0])


def test_sin_cos_examples():
    s, c = jet_sin_cos(J(math.pi / 2, 0, 0))
    assert np.allclose(s.coeffs, [1, 0, 0]) and np.allclose(c.coeffs, [0, 0, 0], atol=1e-16)
    s, c = jet_sin_cos(J(0, 1, 0))
    assert np.allclose(s.coeffs, [0, 1, 0]) and np.allclose(c.coeffs, [1, 0, -0.5])
    s, c = jet_sin_cos(J(math.pi / 6, 1))
    assert np.allclose(s.coeffs, [0.5, math.sqrt(3) / 2]) and np.allclose(c.coeffs, [math.sqrt(3) / 2, -0.5])


def test_derivative_examples():
    assert jet_derivative_at_zero(J(1, 2, 3), 2) == 6
    assert jet_derivative_at_zero(J(5, 0), 0) == 5


@settings(max_examples=200, deadline=None)
@given(jets(5, positive=True))
def test_sqrt_squares_back(x):
    y = jet_sqrt(x)
    assert np.allclose(jet_mul(y, y).coeffs, x.coeffs, rtol=0, atol=1e-12 * max(1, np.max(np.abs(x.coeffs))))


@settings(max_examples=200, deadline=None)
@given(jets(6))
def test_pythagoras(x):
    s, c = jet_sin_cos(x)
    one = jet_mul(s, s) + jet_mul(c, c)
    # coefficients grow like |x|^k / k!; scale the tolerance with them
    scale = max(1.0, np.sum(np.abs(x.coeffs[1:]))) ** 6
    assert np.allclose(one.coeffs, [1, 0, 0, 0, 0, 0, 0], atol=1e-12 * scale)


@settings(max_examples=100, deadline=None)
@given(jets(4), jets(4, positive=True))
def test_division_inverts_multiplication(x, y):
    q = jet_div(jet_mul(x, y), y)
    assert np.allclose(q.coeffs, x.coeffs, atol=1e-9)


@settings(max_examples=100, deadline=None)
@given(jets(4, positive=True), st.lists(coef, min_size=2, max_size=2))
def test_truncation_consistency(x, extra):
    # order K pipeline equals the first K+1 coefficients of the order K+2 pipeline
    big = J(*x.coeffs, *extra)

    def pipeline(z):
        s, c = jet_sin_cos(z)
        return jet_div(s, jet_sqrt(z)) * c + z * z

    small, large = pipeline(x), pipeline(big)
    assert np.allclose(small.coeffs, large.coeffs[: x.order + 1], rtol=0,
                       atol=1e-13 * max(1.0, np.max(np.abs(small.coeffs))))


def test_operators_and_batch():
    a = jet_var(2)
    x = Jet(np.array([[1.0, 2.0], [0, 0], [0, 0]])) + a
    assert x.coeffs.shape == (3, 2)
    assert np.allclose((1 / (1 + a)).coeffs, [1, -1, 1])
    assert np.allclose((2 - a).coeffs, [2, -1, 0])
    assert np.allclose((-a).coeffs, [0, -1, 0])
