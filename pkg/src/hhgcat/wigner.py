"""Phase-space and homodyne distributions for every field-state variant.

Two independent routes are kept deliberately separate: closed-form
evaluation (Gaussians, the two-branch interference term, the Laguerre series
for number-diagonal mixtures) and a numerical route that displaces the
truncated Fock vector point by point and reads off the photon-number parity.
The convention is fixed once: integral of W over dx dp = 1, vacuum
W(0,0) = 1/pi, and a coherent amplitude sits at x = sqrt(2) Re alpha.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import pi, sqrt

import numpy as np

from . import _kernels
from .errors import GridTooSmall, MultiModeUnsupported, UnsupportedVariant
from .states import (
    CoherentLabel,
    CoherentSuperposition,
    DiagonalMixture,
    FieldState,
    GaussianState,
    ProductCoherent,
    TruncatedFock,
    to_fock,
)

#: recorded in every exported artifact
CONVENTION = {
    "hbar": 1,
    "vacuum_variance": 0.5,
    "normalization": "integral W(x,p) dx dp = 1",
    "coherent_position": "x = sqrt(2) Re(alpha), p = sqrt(2) Im(alpha)",
    "units": "atomic units (time, frequency); dimensionless quadratures",
}

_BOUNDARY_TOL = 1e-6


def default_axis(extent: float = 6.0, points: int = 201) -> np.ndarray:
    return np.linspace(-extent, extent, points)


@dataclass(frozen=True)
class WignerGrid:
    """W sampled on a rectangular grid: values[i, j] = W(x[i], p[j])."""

    x: np.ndarray
    p: np.ndarray
    values: np.ndarray
    convention: dict

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64)
        p = np.asarray(self.p, dtype=np.float64)
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (x.size, p.size):
            raise ValueError("values must have shape (len(x), len(p))")
        for a in (x, p, v):
            a.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "values", v)

    def integral(self) -> float:
        return float(np.trapezoid(np.trapezoid(self.values, self.p, axis=1), self.x))


@dataclass(frozen=True)
class QuadraturePDF:
    """Homodyne distribution of the rotated quadrature at one LO phase."""

    phase: float
    x: np.ndarray
    pdf: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64)
        pdf = np.asarray(self.pdf, dtype=np.float64)
        if pdf.shape != x.shape:
            raise ValueError("pdf and axis must have matching shapes")
        if np.any(pdf < -1e-12):
            raise ValueError("pdf must be nonnegative")
        x.setflags(write=False)
        pdf.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "pdf", pdf)

    def integral(self) -> float:
        return float(np.trapezoid(self.pdf, self.x))


def _check_boundary(values: np.ndarray):
    edge = max(
        float(np.max(np.abs(values[0, :]))),
        float(np.max(np.abs(values[-1, :]))),
        float(np.max(np.abs(values[:, 0]))),
        float(np.max(np.abs(values[:, -1]))),
    )
    if edge > _BOUNDARY_TOL:
        raise GridTooSmall(f"|W| = {edge:.2e} on the grid boundary; enlarge the grid")


def _gaussian_peak(X, P, beta: complex):
    """Wigner function of |beta>: unit-integral Gaussian of variance 1/2."""
    return np.exp(-((X - sqrt(2) * beta.real) ** 2) - (P - sqrt(2) * beta.imag) ** 2) / pi


def _cross_term(X, P, b1: complex, b2: complex):
    """Wigner transform of |b1><b2| (complex-valued)."""
    gamma = (X + 1j * P) / sqrt(2)
    two_g = 2.0 * gamma - b1
    inner = np.exp(
        -0.5 * abs(b2) ** 2 - 0.5 * (two_g.real**2 + two_g.imag**2) + np.conj(b2) * two_g
    )
    phase = np.exp(-2j * (gamma * np.conj(b1)).imag)
    return phase * inner / pi


def _laguerre_series(weights: np.ndarray, X, P):
    """sum_n p_n (-1)^n L_n(2 r^2) e^{-r^2} / pi."""
    z = 2.0 * (X**2 + P**2)
    acc = np.zeros_like(z)
    l_prev = np.ones_like(z)  # L_0
    acc += weights[0] * l_prev
    if weights.size > 1:
        l_cur = 1.0 - z  # L_1
        acc -= weights[1] * l_cur
        sign = 1.0
        for n in range(1, weights.size - 1):
            l_next = ((2 * n + 1 - z) * l_cur - n * l_prev) / (n + 1)
            l_prev, l_cur = l_cur, l_next
            acc += sign * weights[n + 1] * l_cur
            sign = -sign
    return acc * np.exp(-0.5 * z) / pi


def wigner_of(
    state: FieldState | CoherentLabel,
    x_axis: np.ndarray | None = None,
    p_axis: np.ndarray | None = None,
) -> WignerGrid:
    """Closed-form Wigner function of a single-mode state.

    Truncated Fock vectors have no closed form here and are routed through
    the displaced-parity evaluation (see :func:`wigner_oracle`).
    """
    x = default_axis() if x_axis is None else np.asarray(x_axis, dtype=float)
    p = x if p_axis is None else np.asarray(p_axis, dtype=float)
    X, P = np.meshgrid(x, p, indexing="ij")

    if isinstance(state, CoherentLabel):
        w = _gaussian_peak(X, P, state.alpha)
    elif isinstance(state, ProductCoherent):
        if state.n_modes != 1:
            raise MultiModeUnsupported("phase-space evaluation is single-mode")
        w = _gaussian_peak(X, P, state.labels[0])
    elif isinstance(state, CoherentSuperposition):
        n = state.norm()
        if n == 0.0:
            raise ZeroDivisionError("zero superposition has no Wigner function")
        c1, c2 = state.coefficients
        b1, b2 = state.labels
        w = (
            abs(c1) ** 2 * _gaussian_peak(X, P, b1)
            + abs(c2) ** 2 * _gaussian_peak(X, P, b2)
            + 2.0 * np.real(c1 * np.conj(c2) * _cross_term(X, P, b1, b2))
        ) / n**2
    elif isinstance(state, DiagonalMixture):
        w = _laguerre_series(state.weights, X, P)
    elif isinstance(state, GaussianState):
        if state.n_modes != 1:
            raise MultiModeUnsupported("phase-space evaluation is single-mode")
        delta = np.stack([X - state.mean[0], P - state.mean[1]], axis=-1)
        inv = np.linalg.inv(state.cov)
        quad = np.einsum("...i,ij,...j", delta, inv, delta)
        w = np.exp(-0.5 * quad) / (2 * pi * sqrt(np.linalg.det(state.cov)))
    elif isinstance(state, TruncatedFock):
        return wigner_oracle(state, x, p)
    else:
        raise UnsupportedVariant(f"no Wigner evaluation for {type(state).__name__}")

    _check_boundary(w)
    return WignerGrid(x, p, w, dict(CONVENTION))


def oracle_dim(grid_extent: float, amplitude_extent: float) -> int:
    """Cutoff that keeps displaced-state truncation negligible."""
    reach = grid_extent / sqrt(2) + amplitude_extent
    need = int(np.ceil(reach**2 + 8.0 * reach)) + 4
    return max(need, 16)


def wigner_oracle(
    state: FieldState | CoherentLabel,
    x_axis: np.ndarray | None = None,
    p_axis: np.ndarray | None = None,
    dim: int | None = None,
) -> WignerGrid:
    """Wigner function by displaced parity in the truncated number basis.

    Independent of every closed form above: the state vector is displaced
    point by point with the analytic Fock-basis displacement matrix and the
    parity expectation is read off.  Diagonal mixtures are handled exactly
    as weighted ensembles of number states.
    """
    x = default_axis() if x_axis is None else np.asarray(x_axis, dtype=float)
    p = x if p_axis is None else np.asarray(p_axis, dtype=float)
    X, P = np.meshgrid(x, p, indexing="ij")
    gam = (X + 1j * P) / sqrt(2)
    extent = float(max(np.max(np.abs(x)), np.max(np.abs(p))))

    weights = None
    if isinstance(state, DiagonalMixture):
        amp_extent = sqrt(state.weights.size)
        d = dim or oracle_dim(extent, amp_extent)
        weights = np.zeros(d)
        weights[: state.weights.size] = state.weights
        psi = None
    else:
        if isinstance(state, TruncatedFock):
            if state.modes != 1:
                raise MultiModeUnsupported("phase-space evaluation is single-mode")
            base = state
        else:
            base = to_fock(state, dim=dim or 64)
        occupied = np.nonzero(np.abs(base.amplitudes) > 1e-14)[0]
        amp_extent = sqrt(float(occupied[-1]) + 1.0) if occupied.size else 0.0
        d = dim or oracle_dim(extent, amp_extent)
        psi = np.zeros(d, dtype=np.complex128)
        take = min(d, base.dim)
        psi[:take] = base.amplitudes[:take]

    w = _kernels.displaced_parity_grid(psi, gam, weights=weights) / pi
    _check_boundary(w)
    return WignerGrid(x, p, w, dict(CONVENTION))


def hermite_functions(x: np.ndarray, n_max: int) -> np.ndarray:
    """Harmonic-oscillator eigenfunctions h[n, i] on the axis (vacuum var 1/2)."""
    x = np.asarray(x, dtype=float)
    h = np.empty((n_max, x.size))
    h[0] = np.exp(-0.5 * x**2) / pi**0.25
    if n_max > 1:
        h[1] = sqrt(2.0) * x * h[0]
    for n in range(2, n_max):
        h[n] = x * sqrt(2.0 / n) * h[n - 1] - sqrt((n - 1) / n) * h[n - 2]
    return h


def _coherent_wavefunction(x: np.ndarray, beta: complex) -> np.ndarray:
    """<x|beta> in the vacuum-variance-1/2 convention."""
    return (
        np.exp(-0.5 * x**2 + sqrt(2) * beta * x - 0.5 * beta**2 - 0.5 * abs(beta) ** 2)
        / pi**0.25
    )


def quadrature_pdf(
    state: FieldState | CoherentLabel,
    phase: float,
    x_axis: np.ndarray | None = None,
) -> QuadraturePDF:
    """Distribution of the rotated quadrature x_phi (homodyne at LO phase phi).

    Rotating the state by e^{-i phi n} maps each coherent label beta to
    beta e^{-i phi} and each Fock coefficient c_n to c_n e^{-i n phi}; the
    distribution is then the position-quadrature marginal.
    """
    x = np.linspace(-9.0, 9.0, 1201) if x_axis is None else np.asarray(x_axis, dtype=float)

    if isinstance(state, CoherentLabel):
        m = sqrt(2) * (state.alpha * np.exp(-1j * phase)).real
        pdf = np.exp(-((x - m) ** 2)) / sqrt(pi)
    elif isinstance(state, ProductCoherent):
        if state.n_modes != 1:
            raise MultiModeUnsupported("homodyne evaluation is single-mode")
        m = sqrt(2) * (state.labels[0] * np.exp(-1j * phase)).real
        pdf = np.exp(-((x - m) ** 2)) / sqrt(pi)
    elif isinstance(state, CoherentSuperposition):
        n = state.norm()
        if n == 0.0:
            raise ZeroDivisionError("zero superposition has no quadrature pdf")
        c1, c2 = state.coefficients
        b1, b2 = (b * np.exp(-1j * phase) for b in state.labels)
        psi = c1 * _coherent_wavefunction(x, b1) + c2 * _coherent_wavefunction(x, b2)
        pdf = np.abs(psi) ** 2 / n**2
    elif isinstance(state, DiagonalMixture):
        h = hermite_functions(x, state.weights.size)
        pdf = state.weights @ h**2
    elif isinstance(state, GaussianState):
        if state.n_modes != 1:
            raise MultiModeUnsupported("homodyne evaluation is single-mode")
        direction = np.array([np.cos(phase), np.sin(phase)])
        m = float(direction @ state.mean)
        var = float(direction @ state.cov @ direction)
        pdf = np.exp(-((x - m) ** 2) / (2 * var)) / sqrt(2 * pi * var)
    elif isinstance(state, TruncatedFock):
        if state.modes != 1:
            raise MultiModeUnsupported("homodyne evaluation is single-mode")
        coeff = state.amplitudes * np.exp(-1j * phase * np.arange(state.dim))
        h = hermite_functions(x, state.dim)
        psi = coeff @ h
        norm2 = float(np.vdot(state.amplitudes, state.amplitudes).real)
        pdf = np.abs(psi) ** 2 / norm2
    else:
        raise UnsupportedVariant(f"no quadrature pdf for {type(state).__name__}")

    return QuadraturePDF(phase, x, np.maximum(pdf, 0.0))


def quadrature_pdf_fock(
    state: FieldState | CoherentLabel,
    phase: float,
    x_axis: np.ndarray | None = None,
    dim: int = 64,
) -> QuadraturePDF:
    """Independent route: expand in the number basis, then evaluate."""
    return quadrature_pdf(to_fock(state, dim), phase, x_axis)


def wigner_marginal_consistency(
    grid: WignerGrid, phase: float, state: FieldState | CoherentLabel
) -> float:
    """Integrate W along the axis orthogonal to x_phi and compare.

    Returns the maximum absolute deviation between the rotated marginal of
    the sampled grid (bilinear interpolation, zero outside) and the
    closed-form quadrature distribution.  Tomographic self-consistency of
    the two independent code paths.
    """
    xmax = float(min(np.max(np.abs(grid.x)), np.max(np.abs(grid.p))))
    axis = grid.x[np.abs(grid.x) <= 0.72 * xmax]
    cosp, sinp = np.cos(phase), np.sin(phase)

    if abs(sinp) < 1e-12 or abs(cosp) < 1e-12:
        # axis-aligned phase: integrate grid rows/columns directly
        marginal = np.empty(axis.size)
        for i, s in enumerate(axis):
            if abs(sinp) < 1e-12:
                row = np.argmin(np.abs(grid.x - s * np.sign(cosp)))
                marginal[i] = np.trapezoid(grid.values[row, :], grid.p)
            else:
                col = np.argmin(np.abs(grid.p - s * np.sign(sinp)))
                marginal[i] = np.trapezoid(grid.values[:, col], grid.x)
    else:
        from scipy.interpolate import RegularGridInterpolator

        interp = RegularGridInterpolator(
            (grid.x, grid.p), grid.values, method="cubic", bounds_error=False,
            fill_value=0.0,
        )
        ortho = np.linspace(-0.99 * xmax, 0.99 * xmax, 2 * max(grid.p.size, 201))
        marginal = np.empty(axis.size)
        for i, s in enumerate(axis):
            pts = np.stack([s * cosp - ortho * sinp, s * sinp + ortho * cosp], axis=-1)
            marginal[i] = np.trapezoid(interp(pts), ortho)
    reference = quadrature_pdf(state, phase, axis).pdf
    return float(np.max(np.abs(marginal - reference)))
