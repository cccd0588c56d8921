"""First-order Rayleigh-Schroedinger corrections for ``lambda rho^{2n}``.

The harmonic (n = 1) piece of the screened interaction is always absorbed
into ``B_r'`` via :func:`yukent.params.derive_scales`; only anharmonic
terms (n >= 2) are mixed perturbatively here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .basis import energy, normalization
from .matelem import melem_closed
from .params import HarmonicScales, PhysicalParams
from .specfn import laguerre_coeffs


class HarmonicTermError(ValueError):
    """A rho^2 term was passed where only anharmonic terms are allowed."""


class TruncationError(ValueError):
    """The basis is too small for the requested perturbation."""


@dataclass(frozen=True)
class PerturbationTerm:
    """``lam * rho^{2n}``."""

    n: int
    lam: float
    origin: str = "custom"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("perturbation power n must be >= 1")

    @property
    def harmonic(self) -> bool:
        return self.n == 1


def yukawa_term(n: int, p: PhysicalParams, sign: int = 1) -> PerturbationTerm:
    """The ``rho^{2n}`` term of ``4 g^2 exp(-alpha m rho^2)``.

    ``lam = sign * 4 g^2 (-alpha m)^n / n!``.  The default ``sign=+1`` gives
    ``+2 g^2 alpha^2 m^2`` for the quartic term, the convention used
    throughout this package; moving the term from the right-hand side of the
    radial equation into the Hamiltonian corresponds to ``sign=-1``.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    lam = sign * 4.0 * p.g**2 * (-p.alpha * p.m) ** n / math.factorial(n)
    return PerturbationTerm(n, lam, origin="yukawa-expansion")


def quartic_term(p: PhysicalParams) -> PerturbationTerm:
    return yukawa_term(2, p)


@dataclass
class PerturbedState:
    """Ground state as amplitudes over ``phi_j`` plus its polynomial form.

    ``poly_coeffs[i]`` multiplies ``rho^{2i}`` in
    ``exp(-beta rho^2 / 2) * sum_i c_{2i} rho^{2i}``.
    """

    base_beta: float
    amplitudes: np.ndarray
    poly_coeffs: np.ndarray = field(default=None)
    normalized: bool = False
    energy_shift: float = 0.0
    norm_deficit: float = 0.0

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=float)
        if self.poly_coeffs is None:
            self.poly_coeffs = to_poly_form(self)

    def evaluate(self, rho):
        rho = np.asarray(rho, dtype=float)
        r2 = rho**2
        return np.exp(-0.5 * self.base_beta * r2) * np.polynomial.polynomial.polyval(
            r2, self.poly_coeffs
        )

    @property
    def nonzero(self) -> list[int]:
        return [int(j) for j in np.flatnonzero(self.amplitudes)]


def rs_first_order(
    term: PerturbationTerm, scales: HarmonicScales, n_max: int = 8
) -> PerturbedState:
    """``a_j = <j|lam rho^{2n}|0> / (E_0 - E_j)`` for ``1 <= j < n_max``.

    Amplitudes are exactly zero for ``j > term.n``.
    """
    if term.harmonic:
        raise HarmonicTermError(
            "the rho^2 term renormalizes the frequency; use derive_scales instead"
        )
    if n_max <= term.n:
        raise TruncationError(f"n_max={n_max} cannot hold the admixture of rho^{2 * term.n}")
    beta = scales.beta
    e0 = energy(0, scales)
    amps = np.zeros(n_max)
    amps[0] = 1.0
    for j in range(1, n_max):
        v = melem_closed(j, 0, term.n, beta)
        if v:
            amps[j] = term.lam * v / (e0 - energy(j, scales))
    shift = term.lam * melem_closed(0, 0, term.n, beta)
    return PerturbedState(beta, amps, energy_shift=shift)


def to_poly_form(state: PerturbedState, overrides: dict | None = None) -> np.ndarray:
    """Collapse ``sum_j a_j phi_j`` into ``e^{-beta rho^2/2} sum_i c_{2i} rho^{2i}``.

    ``overrides`` maps basis index to a replacement amplitude, e.g. to feed
    in externally quoted ``a_1, a_2``.
    """
    amps = np.array(state.amplitudes, dtype=float)
    if overrides:
        size = max(len(amps), max(overrides) + 1)
        amps = np.pad(amps, (0, size - len(amps)))
        for j, a in overrides.items():
            amps[j] = a
    return amplitudes_to_poly(amps, state.base_beta)


def amplitudes_to_poly(amps, beta: float) -> np.ndarray:
    """Powers-of-``rho^2`` coefficients of ``sum_j a_j phi_j`` without the Gaussian."""
    amps = np.asarray(amps, dtype=float)
    coeffs = np.zeros(len(amps))
    for j, a in enumerate(amps):
        if not a:
            continue
        nj = normalization(j, beta)
        for i, c in enumerate(laguerre_coeffs(j, 1)):
            coeffs[i] += a * nj * float(c) * beta**i
    last = np.flatnonzero(coeffs)
    return coeffs[: last[-1] + 1] if last.size else coeffs[:1]


def normalize(state: PerturbedState) -> PerturbedState:
    """Rescale to unit norm; the pre-scaling excess ``sum_{j>=1} a_j^2`` is kept."""
    norm2 = float(np.dot(state.amplitudes, state.amplitudes))
    excess = norm2 - state.amplitudes[0] ** 2
    if norm2 == 1.0:
        return replace(state, normalized=True, norm_deficit=excess)
    amps = state.amplitudes / math.sqrt(norm2)
    return PerturbedState(
        state.base_beta,
        amps,
        normalized=True,
        energy_shift=state.energy_shift,
        norm_deficit=excess,
    )


def general_admixture(
    n: int, scales: HarmonicScales, lam: float = 1.0, n_max: int | None = None
) -> np.ndarray:
    """First-order amplitudes for ``lam rho^{2n}``, ``2 <= n <= 6``."""
    if not 2 <= n <= 6:
        raise ValueError("general_admixture supports 2 <= n <= 6")
    n_max = n_max or n + 4
    return rs_first_order(PerturbationTerm(n, lam), scales, n_max).amplitudes


def rs_second_order(V: np.ndarray, energies: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """First- and second-order ground-state amplitudes for a matrix ``V``.

    Intermediate normalization (``<0|psi> = 1``); non-degenerate spectrum.
    """
    V = np.asarray(V, dtype=float)
    e = np.asarray(energies, dtype=float)
    denom = np.zeros_like(e)
    denom[1:] = 1.0 / (e[0] - e[1:])
    a1 = V[:, 0] * denom
    a2 = denom * (V[:, 1:] @ a1[1:]) - V[0, 0] * V[:, 0] * denom**2
    a1[0] = a2[0] = 0.0
    return a1, a2


def printed_amplitudes(p: PhysicalParams, scales: HarmonicScales) -> tuple[float, float]:
    """Reference ``(a_1, a_2)`` as transcribed (sign and 2 pi^2 factor included)."""
    k = p.g**2 * math.pi**2 * p.alpha**2 * p.m**2 / (scales.beta**2 * scales.hbar_omega)
    return -12.0 * math.sqrt(2.0) * k, 2.0 * math.sqrt(3.0) * k


def printed_poly_coeffs(p: PhysicalParams, scales: HarmonicScales) -> np.ndarray:
    """Reference ``(c_0, c_2, c_4)`` as transcribed."""
    beta = scales.beta
    k = p.g**2 * math.pi**2 * p.alpha**2 * p.m**2 / scales.hbar_omega
    r2 = math.sqrt(2.0)
    return np.array([r2 * beta - 18.0 * r2 * k / beta, 6.0 * r2 * k, r2 * beta * k])
