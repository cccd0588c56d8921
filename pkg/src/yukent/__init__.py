"""Entanglement entropy of a two-body bound state with a screened interaction.

The relative problem is mapped onto a four-dimensional radial oscillator.
The screening parameter ``alpha`` is then treated perturbatively. The
harmonic piece renormalizes the Gaussian width, and the anharmonic
``rho^{2n}`` pieces mix in excited oscillator states. Each order is checked
against brute-force oracles.
"""

from .params import DomainError, HarmonicScales, PhysicalParams, derive_scales

__all__ = ["DomainError", "HarmonicScales", "PhysicalParams", "derive_scales"]
__version__ = "0.1.0"
