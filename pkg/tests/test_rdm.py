import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from yukent.params import PhysicalParams, baseline_scales
from yukent.perturbation import printed_poly_coeffs
from yukent.rdm import (
    MOMENTUM,
    POSITION,
    GaussPolyKernel,
    NegativeSpectrumWarning,
    bilinear_position_kernel,
    eigenvalue_at,
    expand_in_alpha,
    fourier,
    inverse_fourier,
    momentum_eigenvalue,
    nongaussian_prefactor,
    position_kernel,
    rederived_nongaussian,
    unexpanded_eigenvalue,
)


def test_ground_kernel_is_gaussian():
    k = position_kernel(coeffs=[math.sqrt(2)], beta=1.0)
    s = np.linspace(-4, 4, 9)
    assert np.allclose(k.normalized()(s), np.exp(-s**2 / 4) / (2 * math.pi), atol=1e-15)
    spec = momentum_eigenvalue(k)
    kk = np.linspace(-3, 3, 7)
    assert np.allclose(spec(kk), np.exp(-kk**2) / math.sqrt(math.pi), atol=1e-15)


def test_printed_combination():
    sc = baseline_scales(PhysicalParams())
    c0, c2, c4 = printed_poly_coeffs(PhysicalParams(alpha=0.01), sc)
    b = sc.beta
    k = position_kernel(coeffs=[c0, c2, c4], beta=b, truncation="leading")
    s = np.linspace(-3, 3, 13)
    ref = (c0 * math.pi**3 * np.exp(-b * s**2 / 4)
           * (96 * c4 + b * (8 * b * c0 + 32 * c2 + 4 * (b * c2 + 6 * c4) * s**2 + b * c4 * s**4))
           / (16 * b**4))
    assert np.allclose(k(s), ref, rtol=1e-12, atol=0)


@given(q=st.floats(0.2, 5.0), c=st.lists(st.floats(-3, 3), min_size=1, max_size=4))
def test_fourier_round_trip(q, c):
    k = GaussPolyKernel(q, c, POSITION)
    back = inverse_fourier(fourier(k))
    s = np.linspace(-3, 3, 7)
    assert np.allclose(back(s), k(s), atol=1e-10 * (1 + max(abs(x) for x in c)))


def test_fourier_against_grid():
    k = GaussPolyKernel(0.3, (1.0, -0.5, 0.1), POSITION)
    s = np.linspace(-40, 40, 20001)
    kk = np.array([0.0, 0.7, 2.0])
    grid = np.trapezoid(k(s)[None, :] * np.cos(np.outer(kk, s)), s, axis=1)
    assert np.allclose(fourier(k)(kk), grid, atol=1e-12)


def test_variable_checks():
    with pytest.raises(ValueError):
        fourier(GaussPolyKernel(1.0, (1.0,), MOMENTUM))
    with pytest.raises(ValueError):
        GaussPolyKernel(1.0, (1.0,)) + GaussPolyKernel(2.0, (1.0,))
    with pytest.raises(ValueError):
        GaussPolyKernel(0.0, (1.0,))


def test_normalization_hierarchy():
    ex = expand_in_alpha(PhysicalParams())
    assert ex.rho0.integral() == pytest.approx(1.0, rel=1e-15)
    for piece in (ex.rho1, ex.rho2_G, ex.rho2_NG):
        assert abs(piece.integral()) < 1e-12


def test_nongaussian_shape():
    p = PhysicalParams()
    ex = expand_in_alpha(p)
    k = np.linspace(-3, 3, 13)
    expected = nongaussian_prefactor(p) * np.exp(-k**2) * ex.P(k)
    assert np.allclose(ex.rho2_NG(k), expected, atol=1e-14)
    assert nongaussian_prefactor(p) == pytest.approx(math.pi**1.5 / 2)


def test_unexpanded_matches_series_at_small_alpha():
    p = PhysicalParams()
    ex = expand_in_alpha(p)
    k = np.linspace(-4, 4, 33)
    diffs = [np.abs(unexpanded_eigenvalue(p, a)(k) - ex.series(a)(k)).max() for a in (2e-3, 1e-3)]
    assert diffs[0] / diffs[1] == pytest.approx(8.0, rel=0.05)
    assert unexpanded_eigenvalue(p, 0.05).integral() == pytest.approx(1.0, rel=1e-13)
    with pytest.raises(ValueError):
        unexpanded_eigenvalue(p, 0.01, variant="x")


def test_rederived_is_scaled_closed_form():
    p = PhysicalParams()
    closed = expand_in_alpha(p).rho2_NG
    k = np.linspace(-3, 3, 13)
    assert np.allclose(closed(k), -2 * math.pi**2 * rederived_nongaussian(p)(k), atol=1e-12)


def test_full_truncation_bilinear_symmetric():
    a = bilinear_position_kernel([1.0, 0.2], [1.0, -0.3], 1.0)
    b = bilinear_position_kernel([1.0, -0.3], [1.0, 0.2], 1.0)
    assert np.allclose(a.poly, b.poly)


def test_negative_series_warns():
    ex = expand_in_alpha(PhysicalParams())
    with pytest.warns(NegativeSpectrumWarning):
        eigenvalue_at(ex, 0.5, 0.0)


def test_max_power_guard():
    with pytest.raises(ValueError):
        position_kernel(coeffs=[1.0, 0.0, 0.0, 1.0], beta=1.0)
