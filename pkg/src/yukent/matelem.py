"""Matrix elements ``<m| rho^{2p} |n>`` in the radial basis.

The closed form reduces each element to the integral
``int_0^inf e^{-x} x^{p+1} L_m^{(1)} L_n^{(1)} dx``, evaluated exactly in
integers: ``x**p L_n`` is re-expanded in the ``L_j`` and orthogonality
``int e^{-x} x L_m L_j dx = (m+1) delta_mj`` picks out one coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .basis import ANGULAR_VOLUME, normalization
from .specfn import DEFAULT_LAGUERRE_ORDER, gauss_laguerre, laguerre_eval, x_power_expansion

CONVENTIONS = ("bare", "with-angular-2pi2")


class ConvergenceError(RuntimeError):
    """Two quadrature orders disagree beyond tolerance."""


def moment_integral(m: int, n: int, p: int) -> int:
    """Exact ``int_0^inf e^{-x} x^{p+1} L_m^{(1)}(x) L_n^{(1)}(x) dx``."""
    if min(m, n, p) < 0:
        raise ValueError("m, n, p must be non-negative")
    if m > n:
        m, n = n, m
    return (m + 1) * x_power_expansion(n, p).get(m, 0)


def melem_closed(m: int, n: int, p: int, beta: float, convention: str = "bare") -> float:
    """``<m| rho^{2p} |n> = N_m N_n / (2 beta^{p+2}) * moment_integral``."""
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    if beta <= 0:
        raise ValueError("beta must be positive")
    value = (
        normalization(m, beta)
        * normalization(n, beta)
        / (2.0 * beta ** (p + 2))
        * moment_integral(m, n, p)
    )
    if convention != "bare":
        value *= ANGULAR_VOLUME
    return value


def melem_exact_scaled(m: int, n: int, p: int) -> tuple[Fraction, int]:
    """``(r, d)`` with ``<m|rho^{2p}|n> = r / (beta^p sqrt(d))`` exactly."""
    return Fraction(moment_integral(m, n, p)), (m + 1) * (n + 1)


def _melem_quad_once(m, n, p, beta, rule):
    # rho^3 d rho = x dx / (2 beta^2); the e^{-x} weight is inside the rule
    x = rule.nodes
    vals = x**p * laguerre_eval(m, 1, x) * laguerre_eval(n, 1, x)
    return (
        normalization(m, beta)
        * normalization(n, beta)
        / (2.0 * beta ** (p + 2))
        * float(np.sum(rule.weights * vals))
    )


def melem_quad(
    m: int,
    n: int,
    p: int,
    beta: float,
    rule=None,
    check_rule=None,
    rtol: float = 1e-10,
    convention: str = "bare",
) -> float:
    """Same element by direct quadrature of ``phi_m rho^{2p} phi_n rho^3``.

    ``rule`` must be a generalized Gauss-Laguerre rule with ``a = 1``.  A
    second rule (default: order + 20) is used as a convergence check and a
    :class:`ConvergenceError` is raised if the two disagree.
    """
    if rule is None:
        rule = gauss_laguerre(DEFAULT_LAGUERRE_ORDER, a=1.0)
    if check_rule is None:
        check_rule = gauss_laguerre(rule.order + 20, a=1.0)
    v1 = _melem_quad_once(m, n, p, beta, rule)
    v2 = _melem_quad_once(m, n, p, beta, check_rule)
    scale = ((2 * max(m, n) + 2 * p + 2) / beta) ** p
    if abs(v1 - v2) > rtol * max(abs(v1), scale):
        raise ConvergenceError(
            f"quadrature orders {rule.order} and {check_rule.order} disagree for "
            f"<{m}|rho^{2 * p}|{n}>: {v1!r} vs {v2!r}"
        )
    if convention != "bare":
        v1 *= ANGULAR_VOLUME
    return v1


def power_matrix(p: int, beta: float, size: int) -> np.ndarray:
    """Dense ``size x size`` matrix of ``rho^{2p}`` from the exact closed form."""
    out = np.zeros((size, size))
    for n in range(size):
        for j, c in x_power_expansion(n, p).items():
            if j < size:
                out[j, n] = c * math.sqrt((j + 1) / (n + 1))
    return out / beta**p


@dataclass
class MatrixElementTable:
    p: int
    beta: float
    convention: str = "bare"
    entries: dict = field(default_factory=dict)

    @classmethod
    def ground_column(cls, p, beta, n_max, convention="bare"):
        table = cls(p, beta, convention)
        for n in range(n_max):
            table.entries[(n, 0)] = melem_closed(n, 0, p, beta, convention)
        return table

    def __getitem__(self, key):
        m, n = key
        if (m, n) in self.entries:
            return self.entries[(m, n)]
        return self.entries[(n, m)]
