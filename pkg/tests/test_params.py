import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from yukent.params import (
    DomainError,
    PhysicalParams,
    baseline_scales,
    beta_at,
    beta_series,
    derive_scales,
)


def test_canonical_beta_series(canonical):
    assert beta_series(canonical) == (1.0, 4.0, -8.0)


def test_alpha_zero_scales(canonical):
    sc = derive_scales(canonical)
    assert sc.B_r_prime == 0.125
    assert sc.omega0 == 1.0
    assert sc.beta == sc.beta0 == 1.0


def test_renormalized_coefficient():
    p = PhysicalParams(g=2.0, m=0.5, alpha=0.1, B_r=0.3)
    sc = derive_scales(p)
    assert sc.B_r_prime == pytest.approx(0.3 + 4.0 * 0.1 * 0.5, rel=1e-15)
    assert sc.omega0 == pytest.approx(math.sqrt(8 * sc.B_r_prime), rel=1e-15)
    assert derive_scales(p, use_renormalized=False).B_r_prime == 0.3


def test_baseline_ignores_alpha():
    p = PhysicalParams(alpha=0.3)
    assert baseline_scales(p).beta == 1.0


@pytest.mark.parametrize("field, value", [("B_r", 0.0), ("B_r", -1.0), ("mu", 0.0),
                                          ("hbar", -1.0), ("m", -0.1), ("alpha", -1e-3),
                                          ("g", math.nan), ("alpha", math.inf)])
def test_domain_errors(field, value):
    with pytest.raises(DomainError):
        PhysicalParams(**{field: value})


def test_beta_at_signed_alpha(canonical):
    assert beta_at(canonical, -0.01) == pytest.approx(math.sqrt(1 - 0.08), rel=1e-15)
    with pytest.raises(DomainError):
        beta_at(canonical, -0.2)


def test_series_remainder_is_cubic(canonical):
    b0, b1, b2 = beta_series(canonical)
    ratios = []
    for a in (1e-2, 1e-3, 1e-4):
        rem = beta_at(canonical, a) - (b0 + b1 * a + b2 * a * a)
        ratios.append(rem / a**3)
    # third Taylor coefficient of sqrt(1 + 8 a) is 32
    for r in ratios:
        assert r == pytest.approx(32.0, rel=0.1)


@given(
    g=st.floats(0.0, 3.0),
    m=st.floats(0.0, 3.0),
    B=st.floats(0.05, 5.0),
    mu=st.floats(0.2, 5.0),
    hbar=st.floats(0.2, 5.0),
)
def test_series_matches_derivatives(g, m, B, mu, hbar):
    p = PhysicalParams(g=g, m=m, B_r=B, mu=mu, hbar=hbar)
    b0, b1, b2 = beta_series(p)
    assert b0 == pytest.approx(beta_at(p, 0.0), rel=1e-14)
    h = 1e-4 * B / max(g * g * m, 1e-3)
    fd1 = (beta_at(p, h) - beta_at(p, -h)) / (2 * h)
    assert fd1 == pytest.approx(b1, rel=1e-6, abs=1e-9 * b0)
    if g * g * m == 0:
        assert b1 == b2 == 0
