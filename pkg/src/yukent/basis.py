"""The four-dimensional, l = 0 radial oscillator basis.

Inner products use the measure ``rho**3 d rho``; the angular volume of the
unit 3-sphere (``2 pi**2``) is kept separate as :data:`ANGULAR_VOLUME`.
With that convention the ground state is ``sqrt(2) beta exp(-beta rho^2/2)``.

Two radial forms appear:

* ``phi_n`` (:func:`eigenfunction`), orthonormal under ``rho**3 d rho``;
* ``u_n = rho**1.5 phi_n`` (:func:`reduced_eigenfunction`), the form that
  satisfies ``-(hbar^2/2mu)(u'' - 3u/(4 rho^2)) + 4 B' rho^2 u = E u``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .params import DomainError, HarmonicScales
from .specfn import laguerre_eval

ANGULAR_VOLUME = 2.0 * math.pi**2


def normalization(n: int, beta: float) -> float:
    """``N_n = sqrt(2 beta^2 n! / Gamma(n + 2))``."""
    return beta * math.sqrt(2.0 / (n + 1))


def eigenfunction(n: int, beta: float, rho):
    """``phi_n(rho) = N_n exp(-beta rho^2 / 2) L_n^{(1)}(beta rho^2)``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if beta <= 0:
        raise DomainError("beta must be positive")
    rho = np.asarray(rho, dtype=float)
    x = beta * rho**2
    out = normalization(n, beta) * np.exp(-0.5 * x) * laguerre_eval(n, 1, x)
    return out if np.ndim(out) else float(out)


def reduced_eigenfunction(n: int, beta: float, rho):
    rho = np.asarray(rho, dtype=float)
    out = rho**1.5 * eigenfunction(n, beta, rho)
    return out if np.ndim(out) else float(out)


def energy(n: int, scales: HarmonicScales) -> float:
    """``E_n = hbar omega0 (2n + 2)`` for l = 0."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return scales.hbar_omega * (2 * n + 2)


@dataclass(frozen=True)
class RadialBasis:
    beta: float
    omega0: float
    n_max: int
    hbar: float = 1.0

    @classmethod
    def from_scales(cls, scales: HarmonicScales, n_max: int) -> "RadialBasis":
        return cls(scales.beta, scales.omega0, n_max, scales.hbar)

    def __call__(self, n, rho):
        return eigenfunction(n, self.beta, rho)

    def energies(self) -> np.ndarray:
        return self.hbar * self.omega0 * (2.0 * np.arange(self.n_max) + 2.0)

    def evaluate(self, amplitudes, rho):
        """``sum_n a_n phi_n(rho)``."""
        rho = np.asarray(rho, dtype=float)
        out = np.zeros_like(rho)
        for n, a in enumerate(amplitudes):
            if a:
                out = out + a * eigenfunction(n, self.beta, rho)
        return out


def map_back_to_x(phi: Callable, A: float = 1.0) -> Callable:
    """Return ``f(x) = A x**0.25 phi(sqrt(x))`` on x >= 0.

    This undoes ``x = rho**2`` and ``f(rho) = A sqrt(rho) phi(rho)``.
    """

    def f(x):
        x = np.asarray(x, dtype=float)
        if np.any(x < 0):
            raise DomainError("relative coordinate x must be >= 0")
        out = A * x**0.25 * phi(np.sqrt(x))
        return out if np.ndim(out) else float(out)

    return f


@dataclass(frozen=True)
class MappingRecord:
    """Bookkeeping for ``x = rho**2``, ``f = A sqrt(rho) phi`` and
    ``h(rho) = A sqrt(rho) exp(-alpha m rho**2)``."""

    A: float = 1.0
    alpha_m: float = 0.0

    @staticmethod
    def x_of_rho(rho):
        return np.asarray(rho, dtype=float) ** 2

    @staticmethod
    def rho_of_x(x):
        x = np.asarray(x, dtype=float)
        if np.any(x < 0):
            raise DomainError("x must be >= 0")
        return np.sqrt(x)

    def f_of_phi(self, phi: Callable) -> Callable:
        return lambda rho: self.A * np.sqrt(rho) * phi(rho)

    def h_of_rho(self, rho):
        rho = np.asarray(rho, dtype=float)
        return self.A * np.sqrt(rho) * np.exp(-self.alpha_m * rho**2)
