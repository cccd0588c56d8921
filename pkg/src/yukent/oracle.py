"""Brute-force checks that do not reuse the closed forms they adjudicate.

* exact diagonalization of the anharmonic radial Hamiltonian in a
  truncated oscillator basis;
* the reduced density kernel by direct (y, theta) quadrature of the
  wavefunction values;
* finite-difference residuals of the radial equation and of the basis
  Hamiltonian.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .basis import ANGULAR_VOLUME, eigenfunction, normalization
from .matelem import ConvergenceError, power_matrix
from .params import HarmonicScales, PhysicalParams, derive_scales
from .perturbation import HarmonicTermError, PerturbationTerm, TruncationError
from .specfn import gauss_laguerre, gauss_legendre, laguerre_eval

DEFAULT_NMAX = 60
Y_ORDER = 200
THETA_ORDER = 100


class TruncationWarning(UserWarning):
    pass


class BoundaryContaminationError(RuntimeError):
    pass


@dataclass(frozen=True)
class TruncatedHamiltonian:
    n_max: int
    matrix: np.ndarray
    terms: tuple
    scales: HarmonicScales


def build_hamiltonian(terms, scales: HarmonicScales, n_max: int = DEFAULT_NMAX) -> TruncatedHamiltonian:
    """``H_mn = E_m delta_mn + sum lam <m|rho^{2p}|n>`` on the first ``n_max`` states."""
    terms = tuple(terms)
    for t in terms:
        if t.harmonic:
            raise HarmonicTermError("harmonic terms enter through the scales, not the matrix")
    top = max((t.n for t in terms), default=0)
    if n_max < 2 + top:
        raise TruncationError(f"n_max={n_max} too small for rho^{2 * top}")
    if terms and top >= n_max / 2:
        warnings.warn(
            f"rho^{2 * top} couples states across half the basis (n_max={n_max})",
            TruncationWarning,
            stacklevel=2,
        )
    H = np.diag(scales.hbar_omega * (2.0 * np.arange(n_max) + 2.0))
    for t in terms:
        H = H + t.lam * power_matrix(t.n, scales.beta, n_max)
    return TruncatedHamiltonian(n_max, H, terms, scales)


def ground_state(h: TruncatedHamiltonian, tol: float = 1e-12):
    """Lowest eigenpair; the phi_0 component of the vector is made positive."""
    try:
        w, v = linalg.eigh(h.matrix, subset_by_index=[0, 0])
    except linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigensolver failed: {exc}") from exc
    e, vec = float(w[0]), v[:, 0]
    if vec[0] < 0:
        vec = -vec
    resid = np.linalg.norm(h.matrix @ vec - e * vec)
    if resid > tol * max(1.0, np.abs(h.matrix).max()):
        raise ConvergenceError(f"eigenvector residual {resid:.3e} above tolerance")
    return e, vec


def spectrum(h: TruncatedHamiltonian, count: int = 4) -> np.ndarray:
    return linalg.eigh(h.matrix, eigvals_only=True, subset_by_index=[0, count - 1])


def overlap_ratios(vec) -> np.ndarray:
    """``<phi_j|psi> / <phi_0|psi>``."""
    vec = np.asarray(vec, dtype=float)
    return vec / vec[0]


# ---------------------------------------------------------------------------
# reduced density kernel by quadrature


@dataclass
class GridKernel:
    s_grid: np.ndarray
    values: np.ndarray
    spacing: float | None = None
    trace: float = field(default=1.0)

    def __call__(self, s):
        return np.interp(s, self.s_grid, self.values)


def _radial_poly(amplitudes, beta, r2):
    # sum_j a_j N_j L_j^{(1)}(beta r^2), the wavefunction without its Gaussian
    out = np.zeros_like(r2)
    for j, a in enumerate(amplitudes):
        if a:
            out += a * normalization(j, beta) * laguerre_eval(j, 1, beta * r2)
    return out


def _kernel_values(amplitudes, beta, s, t_rule, th_rule):
    t = t_rule.nodes[:, None]
    y2 = t / beta
    th = th_rule.nodes[None, :]
    cos = np.cos(th)
    sin2 = np.sin(th) ** 2
    w = t_rule.weights[:, None] * th_rule.weights[None, :] * sin2
    out = np.empty(len(s))
    for i, si in enumerate(s):
        a = y2 + si**2 / 4.0
        b = np.sqrt(y2) * si * cos
        pp = _radial_poly(amplitudes, beta, a + b)
        pm = _radial_poly(amplitudes, beta, a - b)
        out[i] = np.sum(w * pp * pm)
    # y^3 dy e^{-beta y^2} = t e^{-t} dt / (2 beta^2)
    return ANGULAR_VOLUME / (2.0 * beta**2) * np.exp(-beta * np.asarray(s) ** 2 / 4.0) * out


def rdm_numeric(
    amplitudes,
    beta: float,
    s_grid,
    y_order: int = Y_ORDER,
    theta_order: int = THETA_ORDER,
    check: bool = True,
    tol: float = 1e-10,
) -> GridKernel:
    """Translation-invariant kernel ``rho(s)`` of ``psi = sum_j a_j phi_j``.

    Integrates ``psi(r_+) psi(r_-)`` over the second particle with the 4D
    measure ``2 pi^2 y^3 sin^2(theta) dy dtheta`` and normalizes so that
    ``2 pi rho(0) = 1``.  With ``check=True`` the integral is repeated with
    higher orders and a :class:`ConvergenceError` is raised on mismatch.
    """
    s = np.atleast_1d(np.asarray(s_grid, dtype=float))
    t_rule = gauss_laguerre(y_order, a=1.0)
    th_rule = gauss_legendre(theta_order, 0.0, math.pi)
    vals = _kernel_values(amplitudes, beta, np.append(s, 0.0), t_rule, th_rule)
    if check:
        t2 = gauss_laguerre(y_order + 16, a=1.0)
        th2 = gauss_legendre(theta_order + 16, 0.0, math.pi)
        probe = np.array([0.0, 1.0 / math.sqrt(beta), 3.0 / math.sqrt(beta)])
        v1 = _kernel_values(amplitudes, beta, probe, t_rule, th_rule)
        v2 = _kernel_values(amplitudes, beta, probe, t2, th2)
        if np.max(np.abs(v1 - v2)) > tol * max(abs(v2[0]), 1e-300):
            raise ConvergenceError(
                f"rdm quadrature not converged (orders {y_order}/{theta_order}): "
                f"max change {np.max(np.abs(v1 - v2)):.3e}"
            )
    trace = 2.0 * math.pi * vals[-1]
    spacing = float(s[1] - s[0]) if s.size > 1 else None
    return GridKernel(s, vals[:-1] / trace, spacing, trace)


def grid_fourier(kernel: GridKernel, k) -> np.ndarray:
    """``int rho(s) cos(k s) ds`` by the trapezoid rule on the kernel's grid."""
    k = np.atleast_1d(np.asarray(k, dtype=float))
    s = kernel.s_grid
    return np.trapezoid(kernel.values[None, :] * np.cos(np.outer(k, s)), s, axis=1)


# ---------------------------------------------------------------------------
# finite-difference residuals

_D2_9 = np.array([-1 / 560, 8 / 315, -1 / 5, 8 / 5, -205 / 72, 8 / 5, -1 / 5, 8 / 315, -1 / 560])
_D1_9 = np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 0.0, 4 / 5, -1 / 5, 4 / 105, -1 / 280])


def apply_h0_fd(fn, rho, scales: HarmonicScales, h: float = 1e-2):
    """``H0 R = -(hbar^2/2mu)(R'' + 3R'/rho) + 4 B' rho^2 R`` with 9-point stencils.

    ``fn`` must accept negative arguments (radial functions of ``rho^2``).
    """
    rho = np.asarray(rho, dtype=float)
    offsets = np.arange(-4, 5)
    samples = np.array([fn(rho + o * h) for o in offsets])
    d1 = np.tensordot(_D1_9, samples, axes=1) / h
    d2 = np.tensordot(_D2_9, samples, axes=1) / h**2
    kin = -(scales.hbar**2 / (2.0 * scales.mu)) * (d2 + 3.0 * d1 / rho)
    return kin + 4.0 * scales.B_r_prime * rho**2 * samples[4]


def h0_matrix_fd(scales: HarmonicScales, size: int = 10, nodes: int = 400, h: float = 1e-2):
    """Matrix of ``H0`` in ``{phi_0..phi_{size-1}}`` by FD application and quadrature."""
    rmax = math.sqrt(200.0 / scales.beta)
    rule = gauss_legendre(nodes, 0.0, rmax)
    r = rule.nodes
    w = rule.weights * r**3
    phis = np.array([eigenfunction(n, scales.beta, r) for n in range(size)])
    hphis = np.array(
        [apply_h0_fd(lambda x, n=n: eigenfunction(n, scales.beta, x), r, scales, h) for n in range(size)]
    )
    return (phis * w) @ hphis.T


def gram_matrix(beta: float, size: int = 10, nodes: int = 400) -> np.ndarray:
    rmax = math.sqrt(200.0 / beta)
    rule = gauss_legendre(nodes, 0.0, rmax)
    r = rule.nodes
    phis = np.array([eigenfunction(n, beta, r) for n in range(size)])
    return (phis * rule.weights * r**3) @ phis.T


def _fd_derivatives(f, h):
    # 5-point central stencils on the interior (two points trimmed per side)
    d1 = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
    d2 = (-f[:-4] + 16 * f[1:-3] - 30 * f[2:-2] + 16 * f[3:-1] - f[4:]) / (12 * h**2)
    return d1, d2


@dataclass(frozen=True)
class MappingResidual:
    max_residual: float
    rho: np.ndarray
    residual: np.ndarray
    energy: float
    coupling_mismatch: float


def default_rho_grid(beta: float, points: int = 4001) -> np.ndarray:
    return np.linspace(1e-3, 12.0 / math.sqrt(beta), points)


def mapping_residual(
    p: PhysicalParams,
    phi,
    grid=None,
    energy: float | None = None,
    A: float = 1.0,
    check_boundary: bool = True,
) -> MappingResidual:
    """Residual of the mapped relative equation for ``f = A sqrt(rho) phi(rho)``.

    The equation checked is
    ``-(hbar^2/2mu)(f'' - f'/rho) + 4 B_r rho^2 f - 4 g^2 (e^{-alpha m rho^2} - 1) f = E f``,
    i.e. the constant ``4 g^2`` on the right-hand side plays the part of the
    eigenvalue ``E`` (the default).  ``coupling_mismatch`` is ``4 g^2 - E``.
    ``phi`` is the reduced radial function ``u = rho^{3/2} phi_n``.
    """
    if grid is None:
        grid = default_rho_grid(derive_scales(p).beta)
    rho = np.asarray(grid, dtype=float)
    hstep = np.diff(rho)
    if not np.allclose(hstep, hstep[0], rtol=1e-9, atol=0):
        raise ValueError("mapping_residual needs a uniform grid")
    h = float(hstep[0])
    f = A * np.sqrt(rho) * phi(rho)
    d1, d2 = _fd_derivatives(f, h)
    r = rho[2:-2]
    fi = f[2:-2]
    E = 4.0 * p.g**2 if energy is None else float(energy)
    res = (
        -(p.hbar**2 / (2.0 * p.mu)) * (d2 - d1 / r)
        + 4.0 * p.B_r * r**2 * fi
        - 4.0 * p.g**2 * np.expm1(-p.alpha * p.m * r**2) * fi
        - E * fi
    )
    absres = np.abs(res)
    if check_boundary and absres.size > 40:
        edge = max(5, absres.size // 20)
        inner = absres[edge:-edge].max()
        outer = max(absres[:edge].max(), absres[-edge:].max())
        if outer > 100.0 * max(inner, 1e-300) and outer > 1e-12:
            where = r[int(np.argmax(absres))]
            raise BoundaryContaminationError(
                f"residual concentrated at the grid edge (peak at rho={where:.4g}); "
                "check the grid range and the behaviour of phi there"
            )
    return MappingResidual(
        float(absres.max()), r, res, E, 4.0 * p.g**2 - E
    )


# ---------------------------------------------------------------------------
# convergence summary


def convergence_table(term: PerturbationTerm, scales: HarmonicScales, sizes=(20, 40, 60, 80)):
    rows = []
    for n in sizes:
        e, _ = ground_state(build_hamiltonian([term], scales, n))
        rows.append({"n_max": n, "ground_energy": e})
    return rows


def oracle_report(p: PhysicalParams, n_max: int = DEFAULT_NMAX, lam: float | None = None) -> dict:
    """JSON-ready summary of the diagonalization and residual checks.

    ``lam`` overrides the quartic coupling (default: the one implied by
    ``p.alpha``).
    """
    from .basis import energy, reduced_eigenfunction
    from .perturbation import quartic_term, rs_first_order

    scales = derive_scales(p)
    term = quartic_term(p) if lam is None else PerturbationTerm(2, lam)
    terms = [term] if term.lam else []
    h = build_hamiltonian(terms, scales, n_max)
    e, vec = ground_state(h)
    ratios = overlap_ratios(vec)
    rs = rs_first_order(term, scales, n_max=min(n_max, 8)) if term.lam else None
    overlaps = []
    for j in (1, 2):
        exact = float(ratios[j])
        first = float(rs.amplitudes[j]) if rs is not None else 0.0
        rel = abs(exact / first - 1.0) if first else None
        overlaps.append({"j": j, "exact": exact, "rs_first_order": first, "relative_difference": rel})
    base = p.with_alpha(0.0)
    s0 = derive_scales(base)
    res = {
        "eigenvector": float(np.linalg.norm(h.matrix @ vec - e * vec)),
        "mapping_phi0": mapping_residual(
            base, lambda r: reduced_eigenfunction(0, s0.beta, r), energy=energy(0, s0)
        ).max_residual,
        "mapping_phi1": mapping_residual(
            base, lambda r: reduced_eigenfunction(1, s0.beta, r), energy=energy(1, s0)
        ).max_residual,
        "coupling_mismatch": 4.0 * p.g**2 - energy(0, s0),
    }
    sizes = sorted({max(term.n + 2, n_max // 2), n_max, 2 * n_max})
    return {
        "n_max": n_max,
        "energies": [float(x) for x in spectrum(h, 4)],
        "amplitude_overlaps": overlaps,
        "residual_norms": res,
        "convergence_table": convergence_table(term, scales, sizes) if term.lam else [],
    }
