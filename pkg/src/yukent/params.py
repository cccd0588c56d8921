"""Physical inputs and the harmonic scales derived from them.

Working units default to hbar = mu = 1.  The screening enters the
oscillator problem in two ways: through the renormalized harmonic
coefficient ``B_r' = B_r + g**2 * alpha * m`` (and hence the Gaussian width
``beta(alpha)``) and through the explicit anharmonic terms handled in
:mod:`yukent.perturbation`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace


class DomainError(ValueError):
    """Raised when inputs leave the physically meaningful domain."""


@dataclass(frozen=True)
class PhysicalParams:
    """Couplings and masses of the screened two-body problem.

    ``alpha * m`` acts as an inverse length in working units even though
    ``alpha`` on its own is called dimensionless.
    """

    g: float = 1.0
    alpha: float = 0.0
    m: float = 1.0
    mu: float = 1.0
    hbar: float = 1.0
    B_r: float = 0.125

    def __post_init__(self):
        for name in ("g", "alpha", "m", "mu", "hbar", "B_r"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
        if self.B_r <= 0:
            raise DomainError(f"B_r must be > 0, got {self.B_r}")
        if self.mu <= 0:
            raise DomainError(f"mu must be > 0, got {self.mu}")
        if self.hbar <= 0:
            raise DomainError(f"hbar must be > 0, got {self.hbar}")
        if self.m < 0:
            raise DomainError(f"m must be >= 0, got {self.m}")
        if self.alpha < 0:
            raise DomainError(f"alpha must be >= 0, got {self.alpha}")

    def with_alpha(self, alpha: float) -> "PhysicalParams":
        return replace(self, alpha=float(alpha))


@dataclass(frozen=True)
class HarmonicScales:
    B_r_prime: float
    omega0: float
    beta: float
    beta0: float
    beta1: float
    beta2: float
    hbar: float = 1.0
    mu: float = 1.0

    @property
    def hbar_omega(self) -> float:
        return self.hbar * self.omega0


def _width(B, mu, hbar):
    if B <= 0:
        raise DomainError(f"harmonic coefficient must be > 0, got {B}")
    omega = math.sqrt(8.0 * B / mu)
    return omega, mu * omega / hbar


def beta_at(p: PhysicalParams, alpha: float) -> float:
    """Exact width ``beta`` at an arbitrary (possibly negative) screening.

    Signed ``alpha`` is accepted so that central differences around zero can
    be taken; only ``B_r + g**2 alpha m > 0`` is enforced.
    """
    _, beta = _width(p.B_r + p.g**2 * alpha * p.m, p.mu, p.hbar)
    return beta


def beta_series(p: PhysicalParams) -> tuple[float, float, float]:
    """Taylor coefficients ``(beta0, beta1, beta2)`` of ``beta(alpha)`` at 0."""
    _, beta0 = _width(p.B_r, p.mu, p.hbar)
    ratio = p.g**2 * p.m / p.B_r
    return beta0, 0.5 * ratio * beta0, -0.125 * ratio**2 * beta0


def derive_scales(p: PhysicalParams, use_renormalized: bool = True) -> HarmonicScales:
    """Frequency, width and width-expansion coefficients for ``p``.

    With ``use_renormalized=False`` the O(alpha) harmonic shift is dropped
    and the alpha -> 0 baseline is returned (``B_r' = B_r``).
    """
    B_prime = p.B_r + p.g**2 * p.alpha * p.m if use_renormalized else p.B_r
    omega0, beta = _width(B_prime, p.mu, p.hbar)
    b0, b1, b2 = beta_series(p)
    return HarmonicScales(
        B_r_prime=B_prime,
        omega0=omega0,
        beta=beta,
        beta0=b0,
        beta1=b1,
        beta2=b2,
        hbar=p.hbar,
        mu=p.mu,
    )


def baseline_scales(p: PhysicalParams) -> HarmonicScales:
    """Scales at alpha = 0 (the expansion base point)."""
    return derive_scales(p.with_alpha(0.0))
