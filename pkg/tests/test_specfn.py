import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special

from yukent.specfn import (
    gauss_hermite,
    gauss_laguerre,
    gauss_legendre,
    gaussian_moment,
    laguerre_coeffs,
    laguerre_eval,
    laguerre_moment,
    odd_gaussian_moment,
    trapezoid_on_grid,
    x_power_expansion,
)


def test_quartic_moment_table():
    assert [laguerre_moment(n, 2) for n in range(4)] == [6, -12, 6, 0]
    assert all(isinstance(laguerre_moment(n, 2), Fraction) for n in range(4))


@given(n=st.integers(0, 8), p=st.integers(0, 6))
def test_moment_vanishes_above_power(n, p):
    if n > p:
        assert laguerre_moment(n, p) == 0
    else:
        assert laguerre_moment(n, p) != 0


@pytest.mark.parametrize("n, k", [(0, 1), (1, 1), (5, 1), (12, 0), (7, 3)])
def test_eval_matches_scipy(n, k):
    x = np.linspace(0, 30, 61)
    assert np.allclose(laguerre_eval(n, k, x), special.eval_genlaguerre(n, k, x),
                       rtol=1e-11, atol=1e-11)


def test_coeffs_exact():
    assert laguerre_coeffs(2, 1) == (3, -3, Fraction(1, 2))
    with pytest.raises(ValueError):
        laguerre_coeffs(-1, 1)


@given(n=st.integers(0, 10), p=st.integers(0, 4))
def test_x_power_expansion_reconstructs(n, p):
    x = np.linspace(0.0, 5.0, 7)
    lhs = x**p * laguerre_eval(n, 1, x)
    rhs = sum(c * laguerre_eval(j, 1, x) for j, c in x_power_expansion(n, p).items())
    assert np.allclose(lhs, rhs, rtol=1e-10, atol=1e-8)


def test_gaussian_moments():
    assert gaussian_moment(1.0, 0) == pytest.approx(math.sqrt(math.pi))
    assert gaussian_moment(2.0, 2) == pytest.approx(math.sqrt(2 * math.pi) * 2.0 / 2)
    with pytest.raises(ValueError):
        gaussian_moment(1.0, 3)
    assert odd_gaussian_moment(1.0, 3) == 0.0


def test_laguerre_rule_matches_exact_moments():
    rule = gauss_laguerre(200, a=1.0)
    for n in range(4):
        val = rule.integrate(lambda x: x**2 * laguerre_eval(n, 1, x))
        assert val == pytest.approx(float(laguerre_moment(n, 2)), abs=1e-12)


def test_other_rules():
    h = gauss_hermite(40)
    assert h.integrate(lambda x: x**2) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-13)
    leg = gauss_legendre(10, 0.0, math.pi)
    assert leg.integrate(np.sin) == pytest.approx(2.0, rel=1e-13)
    trap = trapezoid_on_grid(np.linspace(0, 1, 101))
    assert trap.integrate(lambda x: x) == pytest.approx(0.5, rel=1e-14)
    with pytest.raises(ValueError):
        gauss_laguerre(0)
