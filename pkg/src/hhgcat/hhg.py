"""From the dipole signal to conditioned optical cat states.

Pipeline: Fourier components of the dipole expectation give one complex
displacement amplitude per harmonic mode; displacing the driven product
state and conditioning on the harmonic modes turns the fundamental-mode
coherent state into a two-branch superposition.  Phase averaging over the
carrier phase yields the photon-number-diagonal driving state with zero
mean field.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import exp, pi, sqrt

import numpy as np

from .dipole import DipoleSignal
from .errors import (
    DegenerateSuperposition,
    GridTooCoarse,
    ModeCountMismatch,
    UnsupportedVariant,
)
from .states import (
    CoherentLabel,
    CoherentSuperposition,
    DiagonalMixture,
    FieldState,
    ProductCoherent,
)


@dataclass(frozen=True)
class ModeAmplitudes:
    """Displacement amplitude chi_q per harmonic mode q = 1..N."""

    g: float
    omega: float
    chi: np.ndarray

    def __post_init__(self):
        chi = np.asarray(self.chi, dtype=np.complex128)
        if chi.ndim != 1 or chi.size < 2:
            raise ValueError("need amplitudes for at least two modes")
        if not np.all(np.isfinite(chi)):
            raise ValueError("amplitudes must be finite")
        chi.setflags(write=False)
        object.__setattr__(self, "chi", chi)

    @property
    def n_modes(self) -> int:
        return self.chi.size

    def chi_q(self, q: int) -> complex:
        if not 1 <= q <= self.n_modes:
            raise ModeCountMismatch(f"mode index {q} outside 1..{self.n_modes}")
        return complex(self.chi[q - 1])

    @property
    def tail_sum(self) -> float:
        """Total harmonic weight sum_{q>=2} |chi_q|^2."""
        return float(np.sum(np.abs(self.chi[1:]) ** 2))

    def with_chi1(self, chi1: complex) -> "ModeAmplitudes":
        """Override the fundamental-mode amplitude, keeping the harmonics."""
        chi = self.chi.copy()
        chi[0] = chi1
        return ModeAmplitudes(self.g, self.omega, chi)


@dataclass(frozen=True)
class ConditionResult:
    """Outcome of conditioning on the harmonic modes.

    ``cat`` is normalized; ``raw_coefficients`` are the branch coefficients
    before normalization, (1, -xi <alpha|alpha+chi1>), where xi is the
    harmonic-overlap factor of the exact measurement operator (xi = 1 for
    the bare projector variant).
    """

    cat: CoherentSuperposition
    raw_coefficients: tuple[complex, complex]
    success_probability: float
    exact_operator_used: bool

    @property
    def complement_probability(self) -> float:
        return 1.0 - self.success_probability

    def relative_cat(self) -> CoherentSuperposition:
        """The same superposition in the frame displaced by -alpha.

        Branch labels become (chi1, 0) and the branch coefficients reduce to
        (|c1|, -|c2|): the relative phase between the branches cancels in
        this frame and the leftover global phase is dropped (not observable).
        """
        beta1, alpha = self.cat.labels
        c1, c2 = self.cat.coefficients
        return CoherentSuperposition((abs(c1), -abs(c2)), (beta1 - alpha, 0.0))


def compute_chi(dipole: DipoleSignal, g: float, omega: float, n_modes: int) -> ModeAmplitudes:
    """Harmonic displacement amplitudes -i g * integral of <d(t)> e^{i q w t}.

    Trapezoidal quadrature on the signal's grid; the grid must give every
    retained harmonic at least eight samples per period.
    """
    if n_modes < 2:
        raise ModeCountMismatch("need at least two modes")
    if dipole.dt > (2 * pi / (n_modes * omega)) / 8.0:
        raise GridTooCoarse(
            f"harmonic {n_modes} has fewer than 8 samples per period on this grid"
        )
    t = dipole.times()
    w = np.ones(dipole.n)
    w[0] = w[-1] = 0.5
    q = np.arange(1, n_modes + 1)
    phases = np.exp(1j * omega * np.outer(q, t))
    chi = -1j * g * (phases @ (w * dipole.d)) * dipole.dt
    return ModeAmplitudes(g, omega, chi)


def apply_hhg(initial: ProductCoherent, chi: ModeAmplitudes) -> ProductCoherent:
    """Displace every mode label by its harmonic amplitude.

    The per-mode phases of the displacement product are not fixed by the
    dynamics used here; the accumulated label-arithmetic (Weyl) phase is
    recorded on the returned state and nothing observable depends on it.
    """
    if initial.n_modes != chi.n_modes:
        raise ModeCountMismatch(
            f"state has {initial.n_modes} modes, amplitudes have {chi.n_modes}"
        )
    labels = tuple(z + x for z, x in zip(initial.labels, chi.chi))
    weyl = float(
        sum(np.imag(x * np.conj(z)) for z, x in zip(initial.labels, chi.chi))
    )
    return ProductCoherent(labels, phase=initial.phase + weyl)


def coherent_overlap(alpha: complex, beta: complex) -> complex:
    """<alpha|beta> in closed form."""
    return complex(
        np.exp(-0.5 * abs(alpha) ** 2 - 0.5 * abs(beta) ** 2 + np.conj(alpha) * beta)
    )


def condition_on_harmonics(
    state: ProductCoherent,
    alpha: complex | CoherentLabel,
    use_exact_m: bool = True,
) -> ConditionResult:
    """Condition the post-interaction product state on the harmonic modes.

    The fundamental mode collapses onto |alpha+chi1> - xi <alpha|alpha+chi1>
    |alpha>, with xi = exp(-sum_{q>=2} |chi_q|^2) for the exact measurement
    operator and xi = 1 for its projector limit.  The two agree as the
    harmonic weight vanishes.
    """
    if isinstance(alpha, CoherentLabel):
        alpha = alpha.alpha
    alpha = complex(alpha)
    shifted = complex(state.labels[0])
    chi1 = shifted - alpha
    tail = float(sum(abs(z) ** 2 for z in state.labels[1:]))
    xi = exp(-tail) if use_exact_m else 1.0
    ov = coherent_overlap(alpha, shifted)
    c2 = -xi * ov
    success = 1.0 - (2 * xi - xi * xi) * abs(ov) ** 2
    success = min(max(success, 0.0), 1.0)
    if chi1 == 0 and not use_exact_m:
        raise DegenerateSuperposition(
            "projector conditioning with chi1 = 0 annihilates the state"
        )
    raw = CoherentSuperposition((1.0 + 0.0j, c2), (shifted, alpha))
    return ConditionResult(
        cat=raw.normalized(),
        raw_coefficients=(1.0 + 0.0j, c2),
        success_probability=success,
        exact_operator_used=use_exact_m,
    )


def phase_average(alpha_mod: float, tail_mass: float = 1e-12, max_n: int = 4096) -> DiagonalMixture:
    """Carrier-phase-averaged driving state: a Poissonian number mixture.

    Weights e^{-|a|^2} |a|^{2n} / n! are kept until the dropped tail is below
    ``tail_mass``.
    """
    if alpha_mod < 0:
        raise ValueError("alpha modulus must be nonnegative")
    nbar = alpha_mod**2
    if nbar == 0.0:
        return DiagonalMixture(np.array([1.0]))
    weights = [exp(-nbar)]
    total = weights[0]
    n = 0
    while total < 1.0 - tail_mass:
        n += 1
        if n > max_n:
            raise ValueError("cutoff exceeded while accumulating Poisson weights")
        weights.append(weights[-1] * nbar / n)
        total += weights[-1]
    return DiagonalMixture(np.array(weights))


def classical_field(state: FieldState, g: float, omega: float, t) -> np.ndarray:
    """Mean electric field of the state at times t.

    A product of coherent states radiates the classical sinusoid; the
    phase-averaged number-diagonal mixture has an identically vanishing mean
    field.  Other variants are not supported here.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if isinstance(state, ProductCoherent):
        total = np.zeros_like(t)
        for q, label in enumerate(state.labels, start=1):
            total = total - 2.0 * g * sqrt(q) * np.imag(label * np.exp(-1j * q * omega * t))
        return total
    if isinstance(state, DiagonalMixture):
        return np.zeros_like(t)
    raise UnsupportedVariant(
        f"classical field not defined for {type(state).__name__} here"
    )


def measurement_operator_matrix(alpha: complex, tail_sum: float, dim: int) -> np.ndarray:
    """Matrix of the conditioning measurement element in the truncated basis.

    M = 1 - e^{-tail_sum} |alpha><alpha|; with tail_sum = 0 this is the bare
    projector complement.  Used for boundedness checks (0 <= M^dag M <= 1).
    """
    from .states import coherent_amplitudes

    vec = coherent_amplitudes(alpha, dim)
    return np.eye(dim, dtype=np.complex128) - exp(-tail_sum) * np.outer(vec, vec.conj())
