"""Reduced density kernel, its momentum-space spectrum and alpha expansion.

Everything here lives in the class of functions
``exp(-q u^2) * sum_j p_j u^{2j}`` (:class:`GaussPolyKernel`), which is
closed under the Fourier transform and has closed-form moments.

Normalization follows the momentum side: a kernel's *trace* is
``int rho(k) dk``, which for a position kernel equals ``2 pi rho(s=0)``.
All overall constants are fixed by ``trace == 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numpy.polynomial import hermite as H

from .basis import ANGULAR_VOLUME
from .params import PhysicalParams, baseline_scales, beta_series, derive_scales
from .perturbation import PerturbedState, amplitudes_to_poly, quartic_term, rs_first_order
from .specfn import gaussian_moment

POSITION = "position-s"
MOMENTUM = "momentum-k"

# P(beta, k) = 27 beta^2 - 60 beta k^2 + 4 k^4, stored per power of beta
P_POLY = (27.0, -60.0, 4.0)


@dataclass(frozen=True)
class GaussPolyKernel:
    """``exp(-q u^2) * sum_j poly[j] u^{2j}``."""

    q: float
    poly: tuple
    variable: str = MOMENTUM

    def __post_init__(self):
        if not self.q > 0:
            raise ValueError("kernel width q must be positive")
        object.__setattr__(self, "poly", tuple(float(c) for c in self.poly))

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        out = np.exp(-self.q * u**2) * np.polynomial.polynomial.polyval(u**2, self.poly)
        return out if out.ndim else float(out)

    def _check(self, other):
        if other.variable != self.variable or not math.isclose(other.q, self.q, rel_tol=1e-14):
            raise ValueError("kernels must share width and variable")

    def __add__(self, other: "GaussPolyKernel") -> "GaussPolyKernel":
        self._check(other)
        n = max(len(self.poly), len(other.poly))
        a = np.pad(self.poly, (0, n - len(self.poly)))
        b = np.pad(other.poly, (0, n - len(other.poly)))
        return GaussPolyKernel(self.q, a + b, self.variable)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, c: float) -> "GaussPolyKernel":
        return GaussPolyKernel(self.q, np.asarray(self.poly) * c, self.variable)

    __rmul__ = __mul__

    def times_poly(self, extra) -> "GaussPolyKernel":
        """Multiply by another even polynomial given in powers of ``u^2``."""
        prod = np.polynomial.polynomial.polymul(self.poly, extra)
        return GaussPolyKernel(self.q, prod, self.variable)

    def moment(self, j: int) -> float:
        """``int u^j K(u) du`` over the real line."""
        if j % 2:
            return 0.0
        return sum(
            c * gaussian_moment(1.0 / self.q, 2 * i + j) for i, c in enumerate(self.poly)
        )

    def integral(self) -> float:
        return self.moment(0)

    def trace(self) -> float:
        if self.variable == MOMENTUM:
            return self.integral()
        return 2.0 * math.pi * self.poly[0]

    def normalized(self) -> "GaussPolyKernel":
        t = self.trace()
        if t == 0:
            raise ZeroDivisionError("kernel has zero trace")
        return self * (1.0 / t)


def _transform(q, poly):
    """Map ``e^{-q u^2} u^{2j}`` through ``int du e^{-i v u}``."""
    out = np.zeros(len(poly))
    c = 2.0 * math.sqrt(q)
    for j, pj in enumerate(poly):
        if not pj:
            continue
        hcoef = np.zeros(2 * j + 1)
        hcoef[-1] = 1.0
        mono = H.herm2poly(hcoef)  # H_{2j}(x) in powers of x
        factor = pj * math.sqrt(math.pi / q) * (-1) ** j / (4.0 * q) ** j
        for i in range(0, 2 * j + 1, 2):
            out[i // 2] += factor * mono[i] / c**i
    return 1.0 / (4.0 * q), out


def fourier(kernel: GaussPolyKernel) -> GaussPolyKernel:
    """``K~(k) = int K(s) exp(-i k s) ds`` in closed form."""
    if kernel.variable != POSITION:
        raise ValueError("fourier expects a position-space kernel")
    q, poly = _transform(kernel.q, kernel.poly)
    return GaussPolyKernel(q, poly, MOMENTUM)


def inverse_fourier(kernel: GaussPolyKernel) -> GaussPolyKernel:
    """``K(s) = (1/2pi) int K~(k) exp(i k s) dk``."""
    if kernel.variable != MOMENTUM:
        raise ValueError("inverse_fourier expects a momentum-space kernel")
    q, poly = _transform(kernel.q, kernel.poly)
    return GaussPolyKernel(q, poly / (2.0 * math.pi), POSITION)


def momentum_eigenvalue(kernel: GaussPolyKernel) -> GaussPolyKernel:
    """Normalized spectrum ``rho(k)`` of a translation-invariant kernel."""
    return fourier(kernel).normalized()


# ---------------------------------------------------------------------------
# position kernel from the polynomial-Gaussian wavefunction


def _theta_factor(e: int) -> Fraction:
    # int_0^pi sin^2 t cos^e t dt / pi, e even
    half = e // 2
    num = 1
    for k in range(1, e, 2):
        num *= k
    return Fraction(num, 2 ** (half + 1) * math.factorial(half + 1))


def _pair_kernel(i: int, j: int, beta: float) -> np.ndarray:
    """Coefficients (powers of s^2) of
    ``2pi^2 int y^3 dy sin^2 t dt e^{-beta y^2} r_+^{2i} r_-^{2j}``
    with ``r_pm^2 = a pm b``, ``a = y^2 + s^2/4``, ``b = y s cos t``.
    """
    out = np.zeros(i + j + 1)
    for u in range(i + 1):
        for v in range(j + 1):
            e = u + v
            if e % 2:
                continue
            sign = (-1) ** v
            t = i + j - e
            comb = math.comb(i, u) * math.comb(j, v) * sign
            theta = _theta_factor(e)
            for w in range(t + 1):
                # a^t term: C(t,w) y^{2w} (s^2/4)^{t-w}; b^e: y^e s^e cos^e
                ypow = w + e // 2  # y^{2*ypow} beyond y^3
                y_int = Fraction(math.factorial(1 + ypow), 2)  # times beta^{-(2+ypow)}
                coef = comb * theta * math.comb(t, w) * Fraction(1, 4 ** (t - w)) * y_int
                spow = (t - w) + e // 2
                out[spow] += float(coef) / beta ** (2 + ypow)
    return ANGULAR_VOLUME * math.pi * out


def bilinear_position_kernel(c_plus, c_minus, beta: float, truncation: str = "full"):
    """Kernel of ``psi_A(r_+) psi_B(r_-)`` traced over the second particle.

    ``c_plus``/``c_minus`` are the ``rho^{2i}`` coefficients of the two
    polynomial prefactors.  ``truncation='leading'`` keeps only products in
    which at least one factor is the constant term.
    """
    if truncation not in ("full", "leading"):
        raise ValueError(f"unknown truncation {truncation!r}")
    n = len(c_plus) + len(c_minus) - 1
    poly = np.zeros(n)
    for i, ci in enumerate(c_plus):
        for j, cj in enumerate(c_minus):
            if not (ci and cj):
                continue
            if truncation == "leading" and i and j:
                continue
            pk = _pair_kernel(i, j, beta)
            poly[: len(pk)] += ci * cj * pk
    return GaussPolyKernel(beta / 4.0, poly, POSITION)


def position_kernel(state: PerturbedState | None = None, scales=None, *, coeffs=None,
                    beta: float | None = None, truncation: str = "leading",
                    max_power: int | None = 2) -> GaussPolyKernel:
    """``rho(s)`` for the state ``e^{-beta rho^2/2}(c_0 + c_2 rho^2 + ...)``.

    The default ``truncation='leading'`` keeps ``c_0^2``, ``c_0 c_2`` and
    ``c_0 c_4`` cross terms only; ``'full'`` keeps the whole product.
    ``max_power`` bounds the polynomial degree in ``rho^2`` (``None`` for no
    bound).  The result is unnormalized and includes the ``2 pi^2`` measure.
    """
    if coeffs is None:
        if state is None:
            raise ValueError("need a state or explicit coefficients")
        coeffs = state.poly_coeffs
        beta = state.base_beta
    elif beta is None:
        beta = scales.beta if scales is not None else None
    if beta is None:
        raise ValueError("beta is required")
    coeffs = np.asarray(coeffs, dtype=float)
    if max_power is not None and np.any(coeffs[max_power + 1:]):
        raise ValueError(f"state contains terms beyond rho^{2 * max_power}")
    return bilinear_position_kernel(coeffs, coeffs, beta, truncation)


# ---------------------------------------------------------------------------
# alpha expansion of the momentum spectrum


@dataclass(frozen=True)
class RdmExpansion:
    rho0: GaussPolyKernel
    rho1: GaussPolyKernel
    rho2_G: GaussPolyKernel
    rho2_NG: GaussPolyKernel
    A0: float
    A2: float
    A4: float
    beta0: float
    P_poly: tuple = P_POLY

    @property
    def rho2(self) -> GaussPolyKernel:
        return self.rho2_G + self.rho2_NG

    def series(self, alpha: float) -> GaussPolyKernel:
        return self.rho0 + alpha * self.rho1 + alpha**2 * self.rho2

    def P(self, k):
        k = np.asarray(k, dtype=float)
        b = self.beta0
        return self.P_poly[0] * b**2 + self.P_poly[1] * b * k**2 + self.P_poly[2] * k**4


def nongaussian_prefactor(p: PhysicalParams) -> float:
    """``g^2 m^2 pi^{3/2} / (2 hbar omega0) * beta0^{-9/2}`` at alpha = 0."""
    sc = baseline_scales(p)
    return p.g**2 * p.m**2 * math.pi**1.5 / (2.0 * sc.hbar_omega) * sc.beta0**-4.5


def expand_in_alpha(p: PhysicalParams) -> RdmExpansion:
    """``rho^(0)``, ``rho^(1)``, ``rho^(2)_G`` and ``rho^(2)_NG`` as kernels in k."""
    b0, b1, b2 = beta_series(p)
    q = 1.0 / b0
    C = 1.0 / math.sqrt(math.pi * b0)
    rho0 = GaussPolyKernel(q, (C,))
    rho1 = GaussPolyKernel(q, (-C * b1 / (2 * b0), C * b1 / b0**2))
    A0 = 3.0 * b1**2 / (8.0 * b0**2) - b2 / (2.0 * b0)
    A2 = b2 / b0**2 - 1.5 * b1**2 / b0**3
    A4 = b1**2 / (2.0 * b0**4)
    rho2_G = GaussPolyKernel(q, (C * A0, C * A2, C * A4))
    pref = nongaussian_prefactor(p)
    rho2_NG = GaussPolyKernel(q, (pref * 27 * b0**2, pref * -60 * b0, pref * 4))
    return RdmExpansion(rho0, rho1, rho2_G, rho2_NG, A0, A2, A4, b0)


def unexpanded_eigenvalue(p: PhysicalParams, alpha: float | None = None,
                          variant: str = "full") -> GaussPolyKernel:
    """Closed-form ``rho(k)`` at the exact width ``beta(alpha)``.

    ``variant='full'`` is
    ``e^{-k^2/beta} (2 beta^4 hw + g^2 m^2 pi^2 alpha^2 P(beta,k)) /
    (2 beta^{9/2} sqrt(pi) hw)``, which integrates to one.
    ``variant='doubled'`` carries twice the ``alpha^2`` term (the other
    transcribed normalization) and is kept only for comparison.
    """
    if alpha is None:
        alpha = p.alpha
    sc = derive_scales(p.with_alpha(alpha))
    beta, hw = sc.beta, sc.hbar_omega
    k2 = p.g**2 * p.m**2 * math.pi**2 * alpha**2
    if variant == "doubled":
        k2 *= 2.0
    elif variant != "full":
        raise ValueError(f"unknown variant {variant!r}")
    denom = 2.0 * beta**4.5 * math.sqrt(math.pi) * hw
    poly = (
        (2.0 * beta**4 * hw + k2 * 27 * beta**2) / denom,
        k2 * -60 * beta / denom,
        k2 * 4 / denom,
    )
    return GaussPolyKernel(1.0 / beta, poly)


class NegativeSpectrumWarning(UserWarning):
    pass


def eigenvalue_at(expansion: RdmExpansion, alpha: float, k, check_grid=None):
    """Series value ``rho0 + alpha rho1 + alpha^2 (rho2_G + rho2_NG)`` at ``k``.

    Emits :class:`NegativeSpectrumWarning` if the truncated series dips
    below zero on ``check_grid`` (default ``|k| <= 8 sqrt(beta0)``).
    """
    import warnings

    kern = expansion.series(alpha)
    if check_grid is None:
        check_grid = default_k_grid(expansion.beta0)
    vals = kern(check_grid)
    if np.min(vals) < 0:
        warnings.warn(
            f"truncated series is negative (min {np.min(vals):.3e}) at alpha={alpha}",
            NegativeSpectrumWarning,
            stacklevel=2,
        )
    return kern(k)


def default_k_grid(beta0: float, points: int = 4096, extent: float = 8.0) -> np.ndarray:
    half = extent * math.sqrt(beta0)
    return np.linspace(-half, half, points)


# ---------------------------------------------------------------------------
# alpha^2 non-Gaussian piece re-derived from the wavefunction


def first_order_spectrum(c0, c1, beta: float, truncation: str = "leading") -> GaussPolyKernel:
    """O(eps) part of the normalized spectrum for coefficients ``c0 + eps c1``."""
    c0 = np.asarray(c0, dtype=float)
    c1 = np.asarray(c1, dtype=float)
    k0 = fourier(bilinear_position_kernel(c0, c0, beta, truncation))
    lin = bilinear_position_kernel(c0, c1, beta, truncation)
    lin = lin + bilinear_position_kernel(c1, c0, beta, truncation)
    k1 = fourier(lin)
    t0, t1 = k0.trace(), k1.trace()
    return (k1 - k0 * (t1 / t0)) * (1.0 / t0)


def rederived_nongaussian(p: PhysicalParams, truncation: str = "leading") -> GaussPolyKernel:
    """alpha^2 coefficient of the spectrum built from first-order amplitudes.

    Uses the quartic term of :func:`yukent.perturbation.quartic_term` at
    unit screening (so amplitudes are per ``alpha^2``) on the alpha = 0
    oscillator, then traces and transforms without any transcribed constant.
    """
    sc = baseline_scales(p)
    unit = quartic_term(p.with_alpha(1.0))
    state = rs_first_order(unit, sc, n_max=unit.n + 2)
    c0 = amplitudes_to_poly([1.0], sc.beta)
    amps = state.amplitudes.copy()
    amps[0] = 0.0
    c1 = amplitudes_to_poly(amps, sc.beta)
    return first_order_spectrum(c0, c1, sc.beta, truncation)
