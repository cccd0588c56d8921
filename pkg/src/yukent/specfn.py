"""Associated Laguerre polynomials, Gaussian moments and quadrature rules.

Laguerre coefficients and moments are kept in exact rational arithmetic;
floats appear only when a value is evaluated at a point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import special

DEFAULT_LAGUERRE_ORDER = 200
DEFAULT_HERMITE_ORDER = 200


def laguerre_eval(n: int, k: int, x):
    """Evaluate ``L_n^{(k)}(x)`` with the three-term recurrence.

    Works elementwise on arrays.
    """
    if n < 0 or k < 0:
        raise ValueError("n and k must be non-negative")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = k + 1.0 - x
    for j in range(1, n):
        prev, cur = cur, ((2 * j + k + 1 - x) * cur - (j + k) * prev) / (j + 1)
    return cur if cur.ndim else float(cur)


@lru_cache(maxsize=None)
def laguerre_coeffs(n: int, k: int) -> tuple[Fraction, ...]:
    """Exact power-series coefficients of ``L_n^{(k)}``, lowest order first."""
    if n < 0 or k < 0:
        raise ValueError("n and k must be non-negative")
    return tuple(
        Fraction((-1) ** i * math.comb(n + k, n - i), math.factorial(i))
        for i in range(n + 1)
    )


def laguerre_moment(n: int, p: int) -> Fraction:
    r"""Exact value of :math:`\int_0^\infty e^{-x} x^{p+1} L_n^{(1)}(x)\,dx`.

    Evaluated term by term with :math:`\int_0^\infty e^{-x}x^j dx = j!`.
    Vanishes for ``n > p``.
    """
    if p < 0 or n < 0:
        raise ValueError("n and p must be non-negative")
    return sum(
        (c * math.factorial(p + 1 + i) for i, c in enumerate(laguerre_coeffs(n, 1))),
        Fraction(0),
    )


@lru_cache(maxsize=None)
def x_power_expansion(n: int, p: int, k: int = 1) -> dict[int, int]:
    """Integer coefficients ``c_j`` with ``x**p L_n^{(k)} = sum_j c_j L_j^{(k)}``.

    Built by repeated use of
    ``x L_j = (2j+k+1) L_j - (j+1) L_{j+1} - (j+k) L_{j-1}``.
    """
    coeffs = {n: 1}
    for _ in range(p):
        nxt: dict[int, int] = {}
        for j, c in coeffs.items():
            nxt[j] = nxt.get(j, 0) + c * (2 * j + k + 1)
            nxt[j + 1] = nxt.get(j + 1, 0) - c * (j + 1)
            if j > 0:
                nxt[j - 1] = nxt.get(j - 1, 0) - c * (j + k)
        coeffs = {j: c for j, c in nxt.items() if c}
    return coeffs


def gaussian_moment(q: float, j: int) -> float:
    r""":math:`\int_{-\infty}^{\infty} e^{-k^2/q} k^j\,dk` for even ``j``.

    Odd powers integrate to zero by symmetry; use :func:`odd_gaussian_moment`
    for those.
    """
    if q <= 0:
        raise ValueError("q must be positive")
    if j < 0 or j % 2:
        raise ValueError(f"gaussian_moment needs an even power, got {j}")
    half = j // 2
    return math.sqrt(math.pi * q) * q**half * _double_factorial(j - 1) / 2**half


def odd_gaussian_moment(q: float, j: int) -> float:
    if j % 2 == 0:
        raise ValueError("odd_gaussian_moment needs an odd power")
    return 0.0


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights; ``integrate(f)`` returns ``sum(w * f(nodes))``.

    For the Gauss rules the weight function is folded into ``weights``:
    ``gauss-laguerre`` integrates ``x**a exp(-x) f(x)`` over (0, inf) and
    ``gauss-hermite`` integrates ``exp(-x**2) f(x)`` over the real line.
    """

    kind: str
    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, f) -> float:
        return float(np.sum(self.weights * f(self.nodes)))


def gauss_laguerre(order: int = DEFAULT_LAGUERRE_ORDER, a: float = 0.0) -> QuadratureRule:
    if order < 1:
        raise ValueError("quadrature order must be >= 1")
    x, w = special.roots_genlaguerre(order, a)
    return QuadratureRule("gauss-laguerre", order, x, w)


def gauss_hermite(order: int = DEFAULT_HERMITE_ORDER) -> QuadratureRule:
    if order < 1:
        raise ValueError("quadrature order must be >= 1")
    x, w = special.roots_hermite(order)
    return QuadratureRule("gauss-hermite", order, x, w)


def gauss_legendre(order: int, a: float = -1.0, b: float = 1.0) -> QuadratureRule:
    if order < 1:
        raise ValueError("quadrature order must be >= 1")
    x, w = np.polynomial.legendre.leggauss(order)
    half = 0.5 * (b - a)
    return QuadratureRule("gauss-legendre", order, half * x + 0.5 * (a + b), half * w)


def trapezoid_on_grid(grid) -> QuadratureRule:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise ValueError("trapezoid grid needs at least two points")
    w = np.empty_like(grid)
    d = np.diff(grid)
    w[0] = d[0] / 2
    w[-1] = d[-1] / 2
    w[1:-1] = (d[:-1] + d[1:]) / 2
    return QuadratureRule("trapezoid-on-grid", grid.size, grid, w)
