"""Quantum-optical toolkit for strong-field harmonic emission.

Builds the field-state pipeline of a laser-driven atom: per-mode
displacement amplitudes from the dipole signal, conditioned optical cat
states with Wigner functions and homodyne distributions, phase-averaged
driving states, coherent/incoherent emission spectra with photon
correlations, and quadratic-order Gaussian squeezing diagnostics — each
backed by an independent truncated-Fock-space cross-check.
"""

from ._kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

from . import coherence, dipole, hhg, squeezing, states, wigner  # noqa: E402

__all__ = [
    "KERNEL_BACKEND",
    "__version__",
    "coherence",
    "dipole",
    "hhg",
    "squeezing",
    "states",
    "wigner",
]
