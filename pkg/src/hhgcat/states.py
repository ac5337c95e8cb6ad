"""Field-state representations and elementary Fock-space operations.

Conventions used throughout the package (and recorded in every output
manifest): hbar = 1, dimensionless quadratures x = (b + b^dag)/sqrt(2) and
p = -i(b - b^dag)/sqrt(2), so the vacuum has variance 1/2 in each quadrature
and a coherent amplitude alpha sits at (x, p) = sqrt(2)(Re alpha, Im alpha).
Times and frequencies are atomic units.

Fock-space computations are meant to be run in the frame displaced by the
(large) driving amplitude, so photon-number cutoffs stay small; states are
compared via fidelity, never componentwise, since global phases are not
tracked as observables.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import exp, sqrt

import numpy as np
from scipy.linalg import expm

from .errors import (
    CutoffTooSmall,
    DimensionMismatch,
    UnsupportedVariant,
)

DEFAULT_DIM = 64      # adequate for |amplitude| <= 4
_TRUNC_TOL = 1e-8     # allowed loss of norm to the truncated tail


def _readonly(a, dtype):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class CoherentLabel:
    """Complex amplitude labelling a coherent state."""

    alpha: complex

    def __post_init__(self):
        if not np.isfinite(self.alpha.real) or not np.isfinite(self.alpha.imag):
            raise ValueError("coherent amplitude must be finite")

    @property
    def mean_photon(self) -> float:
        return abs(self.alpha) ** 2


@dataclass(frozen=True)
class ProductCoherent:
    """Product of coherent states, one label per mode.

    ``phase`` records the accumulated global phase of label arithmetic; it is
    carried along but never enters an observable.
    """

    labels: tuple[complex, ...]
    phase: float = 0.0

    def __post_init__(self):
        labels = tuple(complex(z) for z in self.labels)
        if not all(np.isfinite(z.real) and np.isfinite(z.imag) for z in labels):
            raise ValueError("labels must be finite")
        object.__setattr__(self, "labels", labels)

    @property
    def n_modes(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class CoherentSuperposition:
    """Two-branch superposition c1|beta1> + c2|beta2> of one mode."""

    coefficients: tuple[complex, complex]
    labels: tuple[complex, complex]

    def branch_overlap(self) -> complex:
        """<beta1|beta2> for the two branch labels."""
        b1, b2 = self.labels
        return np.exp(-0.5 * (abs(b1) ** 2 + abs(b2) ** 2) + np.conj(b1) * b2)

    def norm(self) -> float:
        c1, c2 = self.coefficients
        n2 = (
            abs(c1) ** 2
            + abs(c2) ** 2
            + 2.0 * np.real(np.conj(c1) * c2 * self.branch_overlap())
        )
        return sqrt(max(n2, 0.0))

    def normalized(self) -> "CoherentSuperposition":
        n = self.norm()
        if n == 0.0:
            raise ZeroDivisionError("cannot normalize a zero superposition")
        c1, c2 = self.coefficients
        return CoherentSuperposition((c1 / n, c2 / n), self.labels)


@dataclass(frozen=True)
class DiagonalMixture:
    """Photon-number-diagonal mixed state: weights over |n><n|."""

    weights: np.ndarray

    def __post_init__(self):
        w = _readonly(self.weights, np.float64)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a nonempty vector")
        if np.any(w < -1e-15):
            raise ValueError("weights must be nonnegative")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1 within 1e-12")
        object.__setattr__(self, "weights", w)

    @property
    def mean_photon(self) -> float:
        return float(np.arange(self.weights.size) @ self.weights)


@dataclass(frozen=True)
class TruncatedFock:
    """State vector in the truncated photon-number basis.

    Multi-mode states are flattened row-major (first mode is the slowest
    index).  Sub-normalized vectors are allowed (post-measurement branches);
    normalize explicitly when needed.
    """

    amplitudes: np.ndarray
    dim: int
    modes: int = 1

    def __post_init__(self):
        a = _readonly(self.amplitudes, np.complex128)
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if a.ndim != 1 or a.size != self.dim**self.modes:
            raise ValueError("amplitude vector must have length dim**modes")
        n2 = float(np.vdot(a, a).real)
        if n2 > 1.0 + 1e-12:
            raise ValueError(f"norm^2 = {n2} exceeds 1 + 1e-12")
        object.__setattr__(self, "amplitudes", a)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "TruncatedFock":
        n = self.norm()
        if n == 0.0:
            raise ZeroDivisionError("cannot normalize the zero vector")
        return TruncatedFock(self.amplitudes / n, self.dim, self.modes)

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per mode."""
        return self.amplitudes.reshape((self.dim,) * self.modes)


@dataclass(frozen=True)
class GaussianState:
    """Gaussian state: quadrature means and covariance.

    Ordering is (x_1 .. x_N, p_1 .. p_N); the vacuum covariance is I/2.
    """

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = _readonly(self.mean, np.float64)
        cov = _readonly(self.cov, np.float64)
        if mean.ndim != 1 or mean.size % 2:
            raise ValueError("mean must be a 2N-vector")
        if cov.shape != (mean.size, mean.size):
            raise ValueError("cov must be 2N x 2N")
        if np.max(np.abs(cov - cov.T)) > 1e-10:
            raise ValueError("covariance must be symmetric")
        ev = np.linalg.eigvalsh(cov + 0.5j * symplectic_form(mean.size // 2))
        if ev.min() < -1e-10:
            raise ValueError("covariance violates the uncertainty relation")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def n_modes(self) -> int:
        return self.mean.size // 2


FieldState = (
    ProductCoherent
    | CoherentSuperposition
    | DiagonalMixture
    | TruncatedFock
    | GaussianState
)


def symplectic_form(n_modes: int) -> np.ndarray:
    """Symplectic form Omega for (x_1..x_N, p_1..p_N) ordering."""
    eye = np.eye(n_modes)
    zero = np.zeros((n_modes, n_modes))
    return np.block([[zero, eye], [-eye, zero]])


def coherent_amplitudes(alpha: complex, dim: int) -> np.ndarray:
    """Number-basis expansion e^{-|a|^2/2} a^n / sqrt(n!) of |alpha>."""
    out = np.empty(dim, dtype=np.complex128)
    out[0] = exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, dim):
        out[n] = out[n - 1] * alpha / sqrt(n)
    return out


def _check_coherent_cutoff(alpha: complex, dim: int):
    amps = coherent_amplitudes(alpha, dim)
    loss = abs(1.0 - float(np.vdot(amps, amps).real))
    if loss > _TRUNC_TOL:
        raise CutoffTooSmall(
            f"cutoff {dim} loses norm {loss:.2e} for amplitude {alpha!r}"
        )
    return amps


def to_fock(state: FieldState | CoherentLabel, dim: int = DEFAULT_DIM) -> TruncatedFock:
    """Represent a field state in the truncated photon-number basis.

    Coherent labels map to their closed-form expansion.  A diagonal mixture
    maps to the vector sqrt(weights): only its number distribution is
    meaningful (the mixture carries no coherences).  Gaussian states have no
    finite expansion here and are rejected.
    """
    if isinstance(state, CoherentLabel):
        return TruncatedFock(_check_coherent_cutoff(state.alpha, dim), dim)
    if isinstance(state, ProductCoherent):
        vec = np.ones(1, dtype=np.complex128)
        for z in state.labels:
            vec = np.kron(vec, _check_coherent_cutoff(z, dim))
        return TruncatedFock(vec, dim, modes=state.n_modes)
    if isinstance(state, CoherentSuperposition):
        c1, c2 = state.coefficients
        b1, b2 = state.labels
        vec = c1 * _check_coherent_cutoff(b1, dim) + c2 * _check_coherent_cutoff(b2, dim)
        return TruncatedFock(vec, dim)
    if isinstance(state, DiagonalMixture):
        w = state.weights
        if w.size > dim and np.sum(w[dim:]) > _TRUNC_TOL:
            raise CutoffTooSmall(f"cutoff {dim} drops weight {np.sum(w[dim:]):.2e}")
        vec = np.zeros(dim, dtype=np.complex128)
        upto = min(dim, w.size)
        vec[:upto] = np.sqrt(w[:upto])
        return TruncatedFock(vec, dim)
    if isinstance(state, TruncatedFock):
        if state.modes != 1 and dim != state.dim:
            raise DimensionMismatch("cannot re-truncate a multi-mode state")
        if dim == state.dim:
            return state
        vec = np.zeros(dim, dtype=np.complex128)
        upto = min(dim, state.dim)
        vec[:upto] = state.amplitudes[:upto]
        if state.dim > dim:
            dropped = float(np.sum(np.abs(state.amplitudes[dim:]) ** 2))
            if dropped > _TRUNC_TOL:
                raise CutoffTooSmall(f"re-truncation drops norm {dropped:.2e}")
        return TruncatedFock(vec, dim)
    raise UnsupportedVariant(f"no Fock representation for {type(state).__name__}")


def ladder(dim: int) -> np.ndarray:
    """Annihilation operator in the truncated basis."""
    return np.diag(np.sqrt(np.arange(1, dim)), k=1).astype(np.complex128)


def displacement_generator(beta: complex, dim: int) -> np.ndarray:
    """beta b^dag - beta* b in the truncated basis."""
    b = ladder(dim)
    return beta * b.conj().T - np.conj(beta) * b


def displace(state: TruncatedFock, beta: complex, mode: int = 0) -> TruncatedFock:
    """Apply the displacement operator via the truncated matrix exponential.

    The truncated generator is still anti-Hermitian, so the map is exactly
    unitary; truncation error shows up as weight leaking toward the cutoff,
    which is what the headroom check monitors.
    """
    if not (0 <= mode < state.modes):
        raise DimensionMismatch(f"mode {mode} out of range for {state.modes}-mode state")
    d = expm(displacement_generator(beta, state.dim))
    if state.modes == 1:
        new = d @ state.amplitudes
    else:
        tens = np.moveaxis(state.tensor(), mode, 0)
        new = np.moveaxis(np.tensordot(d, tens, axes=(1, 0)), 0, mode).ravel()
    _check_headroom(new, state.dim, state.modes, mode)
    return TruncatedFock(new, state.dim, state.modes)


def _check_headroom(vec: np.ndarray, dim: int, modes: int, mode: int):
    guard = max(2, dim // 16)
    tens = np.abs(vec.reshape((dim,) * modes)) ** 2
    tail = float(np.sum(np.take(tens, np.arange(dim - guard, dim), axis=mode)))
    total = float(np.sum(tens))
    if total > 0 and tail > _TRUNC_TOL * total:
        raise CutoffTooSmall(
            f"displaced state carries weight {tail:.2e} in the top {guard} levels"
        )


def overlap(a: TruncatedFock, b: TruncatedFock) -> complex:
    """Inner product <a|b>."""
    if a.dim != b.dim or a.modes != b.modes:
        raise DimensionMismatch(
            f"({a.dim}, {a.modes} modes) vs ({b.dim}, {b.modes} modes)"
        )
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: TruncatedFock, b: TruncatedFock) -> float:
    """|<a|b>|^2 for normalized inputs (normalizes internally)."""
    na, nb = a.norm(), b.norm()
    if na == 0.0 or nb == 0.0:
        raise ZeroDivisionError("fidelity undefined for the zero vector")
    return abs(overlap(a, b)) ** 2 / (na**2 * nb**2)


def mean_photon(state: TruncatedFock, mode: int = 0) -> float:
    """Mean photon number of one mode (normalizes internally)."""
    tens = np.abs(state.tensor()) ** 2
    axes = tuple(ax for ax in range(state.modes) if ax != mode)
    dist = tens.sum(axis=axes) if axes else tens
    total = dist.sum()
    if total == 0.0:
        raise ZeroDivisionError("mean photon number undefined for the zero vector")
    return float(np.arange(state.dim) @ dist / total)


def number_distribution(state: TruncatedFock, mode: int = 0) -> np.ndarray:
    """Photon-number distribution of one mode (normalized)."""
    tens = np.abs(state.tensor()) ** 2
    axes = tuple(ax for ax in range(state.modes) if ax != mode)
    dist = tens.sum(axis=axes) if axes else tens
    return dist / dist.sum()


def vacuum(dim: int = DEFAULT_DIM, modes: int = 1) -> TruncatedFock:
    vec = np.zeros(dim**modes, dtype=np.complex128)
    vec[0] = 1.0
    return TruncatedFock(vec, dim, modes)


def fock_basis_state(n: int, dim: int = DEFAULT_DIM) -> TruncatedFock:
    vec = np.zeros(dim, dtype=np.complex128)
    vec[n] = 1.0
    return TruncatedFock(vec, dim)
