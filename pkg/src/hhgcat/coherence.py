"""Heisenberg-picture field correlations and emission spectra.

The mode operator splits into free evolution plus a source integral over
the dipole history.  First-order correlations separate exactly into a
coherent part (products of dipole expectations) and an incoherent part
(dipole correlations via the finite atomic basis); the power spectrum is
the tapered transform of the correlation at a late base time.

Without damping the source amplitude grows linearly under a periodic
drive, so the raw correlation G(t, t+tau) grows like t^2.  The stationary
limit is therefore operationalized with the time-averaged Fourier amplitude:
normalized correlations divide by t (t + tau), which makes harmonic weights
intensive (window-independent) and is what the stationarity diagnostic
monitors.  Nothing here assumes ergodicity; the diagnostic reports it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import pi, sqrt

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .dipole import DipoleSignal
from .errors import (
    DivisionByZeroIntensity,
    MissingTransitionDipoles,
    OutOfGridRange,
    WindowTooShort,
)


@dataclass(frozen=True)
class ModeDecomposition:
    """Heisenberg mode operator at time t: free coefficient and source value."""

    free_coefficient: complex
    source: complex


@dataclass(frozen=True)
class CorrelationSeries:
    """Two-time correlation on a tau grid, anchored at one base time."""

    tau: np.ndarray
    values: np.ndarray
    base_time: float
    kind: str = "g1"
    coherent: np.ndarray | None = None
    incoherent: np.ndarray | None = None


@dataclass(frozen=True)
class SpectrumWindow:
    """Finite-time stand-in for the stationary limit."""

    t_base: float
    tau_max: float
    taper: str = "bspline"


def _bspline_taper(tau: np.ndarray) -> np.ndarray:
    """Cubic B-spline lag window: nonnegative spectral kernel, 1/D^4 tails.

    The symmetric extension is C^2 (no kink at zero lag, unlike the
    triangle), so a clean spectral line leaks only sinc^4 tails into
    neighboring harmonic bands while the kernel stays pointwise >= 0.
    """
    x = 2.0 * tau / tau[-1]
    inner = 2.0 / 3.0 - x**2 + 0.5 * x**3
    outer = (2.0 - x) ** 3 / 6.0
    return np.where(x <= 1.0, inner, outer) / (2.0 / 3.0)


@dataclass(frozen=True)
class SpectrumResult:
    freq: np.ndarray
    s_coherent: np.ndarray
    s_incoherent: np.ndarray
    window: SpectrumWindow
    diagnostics: dict = field(default_factory=dict)


def _tone_cumulative(series: np.ndarray, omega_q: float, times: np.ndarray, dt: float):
    """Running integral of series(t) e^{i omega_q t} on the grid."""
    phased = series * np.exp(1j * omega_q * times)
    return cumulative_trapezoid(phased, dx=dt, initial=0.0, axis=0)


def heisenberg_mode(
    dipole: DipoleSignal, g: float, q: int, omega: float, t: float
) -> ModeDecomposition:
    """Source integral sqrt(q) g int_0^t d(t') e^{-i q w (t - t')} dt'.

    Returned together with the free-evolution coefficient e^{-i q w t}; both
    are plain numbers once the dipole expectation stands in for the operator.
    """
    omega_q = q * omega
    idx = dipole.index_of(t)
    times = dipole.times()
    v = _tone_cumulative(dipole.d, omega_q, times, dipole.dt)
    free = complex(np.exp(-1j * omega_q * t))
    return ModeDecomposition(free, complex(sqrt(q) * g * free * v[idx]))


def _source_cumulatives(dipole: DipoleSignal, omega_q: float):
    """Per-basis-state running integrals V_p(s) = int d_{p0}(u) e^{i w u} du."""
    times = dipole.times()
    if dipole.dij is None:
        raise MissingTransitionDipoles("this mode needs the transition-dipole series")
    cols = dipole.dij[:, :, 0]  # d_{p,ground}(t)
    return _tone_cumulative(cols, omega_q, times[:, None], dipole.dt)


def g1(
    dipole: DipoleSignal,
    g: float,
    q: int,
    omega: float,
    t: float,
    tau_grid: np.ndarray,
    mode: str = "coherent_only",
    normalized: bool = False,
) -> CorrelationSeries:
    """First-order correlation <b_q^dag(t) b_q(t + tau)> from the dipole series.

    ``coherent_only`` uses products of the dipole expectation; ``full``
    resolves the intermediate atomic states and reports the incoherent excess
    separately (full = coherent + incoherent holds identically).  With
    ``normalized`` the secular t^2 growth is divided out (see module note).
    """
    if mode not in ("coherent_only", "full"):
        raise ValueError("mode must be 'coherent_only' or 'full'")
    omega_q = q * omega
    it = dipole.index_of(t)
    tau = np.asarray(tau_grid, dtype=float)
    k_tau = np.round(tau / dipole.dt).astype(int)
    if np.any(k_tau < 0) or it + k_tau.max() >= dipole.n:
        raise OutOfGridRange("t + tau leaves the sampled dipole history")
    tau_snapped = k_tau * dipole.dt

    times = dipole.times()
    vbar = _tone_cumulative(dipole.d, omega_q, times, dipole.dt)
    prefactor = q * g * g * np.exp(-1j * omega_q * tau_snapped)
    coh = prefactor * np.conj(vbar[it]) * vbar[it + k_tau]

    incoh = None
    if mode == "full":
        v_p = _source_cumulatives(dipole, omega_q)
        full = prefactor * np.einsum("p,kp->k", np.conj(v_p[it]), v_p[it + k_tau])
        incoh = full - coh
        values = full
    else:
        values = coh

    if normalized:
        t_rel = t - dipole.t0
        denom = t_rel * (t_rel + tau_snapped)
        values = values / denom
        coh = coh / denom
        if incoh is not None:
            incoh = incoh / denom
    return CorrelationSeries(tau_snapped, values, t, "g1", coh, incoh)


def g2(
    dipole: DipoleSignal,
    g: float,
    q: int,
    omega: float,
    t: float,
    tau_grid: np.ndarray,
) -> CorrelationSeries:
    """Normalized second-order correlation of the source field.

    Normally ordered fourth moment of the source parts, evaluated with the
    closed atomic dynamics (quantum regression on the sampled transition
    dipoles); a classical-current source gives exactly 1 for every tau.
    """
    if dipole.dij is None:
        raise MissingTransitionDipoles("g2 needs the transition-dipole series")
    omega_q = q * omega
    it = dipole.index_of(t)
    tau = np.asarray(tau_grid, dtype=float)
    k_tau = np.round(tau / dipole.dt).astype(int)
    if np.any(k_tau < 0) or it + k_tau.max() >= dipole.n:
        raise OutOfGridRange("t + tau leaves the sampled dipole history")
    tau_snapped = k_tau * dipole.dt

    times = dipole.times()
    m_cum = _tone_cumulative(dipole.dij, -omega_q, times[:, None, None], dipole.dt)
    n_cum = np.conj(np.swapaxes(m_cum, 1, 2))

    intensity = np.einsum("kij,kji->ki", m_cum, n_cum)[:, 0].real
    scale = float(np.max(np.abs(intensity)))
    i_t = intensity[it]
    i_tau = intensity[it + k_tau]
    if scale == 0.0 or i_t <= 1e-14 * scale or np.any(i_tau <= 1e-14 * scale):
        raise DivisionByZeroIntensity("mode intensity vanishes; g2 undefined")

    m_t = m_cum[it]
    values = np.empty(tau_snapped.size)
    n_t = n_cum[it]
    for k, kt in enumerate(k_tau):
        chain = m_t @ m_cum[it + kt] @ n_cum[it + kt] @ n_t
        values[k] = chain[0, 0].real / (i_t * i_tau[k])
    return CorrelationSeries(tau_snapped, values, t, "g2")


def default_window(dipole: DipoleSignal, omega: float) -> SpectrumWindow:
    """Split the sampled history: base time at half span, snapped to cycles."""
    period = 2 * pi / omega
    span = dipole.dt * (dipole.n - 1)
    t_base = np.floor(span / 2 / period) * period
    return SpectrumWindow(float(t_base), float(span - t_base))


def time_averaged_fourier(
    dipole: DipoleSignal, omega_q: float, t_start: float, t_stop: float
) -> complex:
    """Time-averaged Fourier amplitude of <d> over [t_start, t_stop].

    A normalized raised-cosine taper keeps the estimate exact for harmonics
    commensurate with the window while suppressing leakage from
    incommensurate content; this is the finite-window stand-in for the
    stationary Fourier amplitude <d>(w).
    """
    i0, i1 = dipole.index_of(t_start), dipole.index_of(t_stop)
    if i1 - i0 < 2:
        raise WindowTooShort("Fourier window must span several samples")
    seg = slice(i0, i1 + 1)
    times = dipole.times()[seg]
    w = np.hanning(times.size)
    w /= w.mean()
    return complex(
        np.mean(w * dipole.d[seg] * np.exp(1j * omega_q * times))
    )


def spectrum(
    dipole: DipoleSignal,
    g: float,
    q_max: int,
    omega: float,
    window: SpectrumWindow | None = None,
    oversample: int = 4,
    stationarity_offsets: int = 4,
    base_average: int = 8,
) -> SpectrumResult:
    """Power spectrum with coherent and incoherent components.

    The coherent part transforms the stationary-limit correlation
    g^2 q |<d>(q w)|^2 e^{-i q w tau}, with the amplitude measured as the
    tapered time-averaged Fourier coefficient of the late window, so every
    harmonic appears as one finite-width peak of that integrated weight.
    The incoherent part transforms the measured correlation excess
    (full - coherent), averaged over base times spanning one carrier cycle
    (the ensemble-average stand-in).  The cubic-B-spline lag taper keeps
    the kernel nonnegative; residual negative excursions are clipped and
    reported.  How far the raw correlation is from stationary is reported,
    never assumed.
    """
    if window is None:
        window = default_window(dipole, omega)
    period = 2 * pi / omega
    if window.t_base < 4 * period or window.tau_max < 4 * period:
        raise WindowTooShort(
            "need at least four fundamental cycles on both sides of the base time"
        )
    if window.taper != "bspline":
        raise ValueError("only the cubic-B-spline taper is supported")
    dt = dipole.dt
    it = dipole.index_of(window.t_base)
    stride = max(1, int(round(period / base_average / dt)))
    base_idx = [it + k * stride for k in range(base_average)]
    n_tau = int(np.floor(window.tau_max / dt)) - base_idx[-1] + it
    if base_idx[-1] + n_tau >= dipole.n:
        n_tau = dipole.n - 1 - base_idx[-1]
    tau = dt * np.arange(n_tau + 1)

    taper = _bspline_taper(tau)
    taper[0] *= 0.5  # trapezoid end weights
    taper[-1] = 0.0

    n_fft = 1 << int(np.ceil(np.log2((n_tau + 1) * oversample)))
    freq = 2 * pi * np.arange(n_fft) / (n_fft * dt)
    keep = freq <= (q_max + 1.5) * omega
    freq = freq[keep]

    times = dipole.times()
    t_end = times[it] + tau[-1]

    has_dij = dipole.dij is not None
    s_coh = np.zeros(freq.size)
    s_incoh = np.zeros(freq.size)
    max_deviation = 0.0
    max_reference = 0.0

    offsets = []
    for k in range(1, stationarity_offsets + 1):
        t_off = window.t_base - k * period
        if t_off >= 4 * period:
            offsets.append(t_off)

    for q in range(1, q_max + 1):
        omega_q = q * omega
        phase = np.exp(-1j * omega_q * tau)
        c_q = time_averaged_fourier(dipole, omega_q, window.t_base, t_end)
        coh_stat = q * g * g * abs(c_q) ** 2 * phase
        s_coh += _tapered_transform(coh_stat, taper, dt, n_fft)[keep]

        vbar = _tone_cumulative(dipole.d, omega_q, times, dt)
        if has_dij:
            v_p = _source_cumulatives(dipole, omega_q)
            incoh_avg = np.zeros(n_tau + 1, dtype=np.complex128)
            for ib in base_idx:
                t_rel = times[ib] - dipole.t0
                denom = t_rel * (t_rel + tau)
                full = np.einsum("p,kp->k", np.conj(v_p[ib]), v_p[ib : ib + n_tau + 1])
                coh_raw = np.conj(vbar[ib]) * vbar[ib : ib + n_tau + 1]
                incoh_avg += (full - coh_raw) / denom
            incoh_avg *= q * g * g * phase / len(base_idx)
            s_incoh += _tapered_transform(incoh_avg, taper, dt, n_fft)[keep]

        # raw-correlation stationarity diagnostic across cycle-shifted bases
        t_rel = times[it] - dipole.t0
        g_ref = q * g * g * phase * np.conj(vbar[it]) * vbar[it : it + n_tau + 1] / (
            t_rel * (t_rel + tau)
        )
        max_reference = max(max_reference, float(np.max(np.abs(g_ref))))
        for t_off in offsets:
            io = dipole.index_of(t_off)
            d_off = (t_off - dipole.t0) * (t_off - dipole.t0 + tau)
            g_off = q * g * g * phase * np.conj(vbar[io]) * vbar[io : io + n_tau + 1] / d_off
            max_deviation = max(max_deviation, float(np.max(np.abs(g_off - g_ref))))

    clip_coh = float(min(0.0, s_coh.min()))
    clip_incoh = float(min(0.0, s_incoh.min()))
    s_coh = np.maximum(s_coh, 0.0)
    s_incoh = np.maximum(s_incoh, 0.0)
    diagnostics = {
        "stationarity_max_absolute_deviation": max_deviation,
        "stationarity_max_relative_deviation": (
            max_deviation / max_reference if max_reference > 0 else 0.0
        ),
        "clipped_coherent_minimum": clip_coh,
        "clipped_incoherent_minimum": clip_incoh,
    }
    return SpectrumResult(freq, s_coh, s_incoh, window, diagnostics)


def _tapered_transform(values: np.ndarray, taper: np.ndarray, dt: float, n_fft: int):
    """(1/pi) Re int_0^taumax w(tau) G(tau) e^{i nu tau} dtau on the FFT comb."""
    z = np.conj(values * taper)
    return dt / pi * np.real(np.fft.fft(z, n=n_fft))


def harmonic_weight(
    result: SpectrumResult, q: int, omega: float, component: str = "coherent"
) -> float:
    """Integrated spectral weight over the band [q w - w/2, q w + w/2]."""
    s = result.s_coherent if component == "coherent" else result.s_incoherent
    lo, hi = (q - 0.5) * omega, (q + 0.5) * omega
    sel = (result.freq >= lo) & (result.freq <= hi)
    return float(np.trapezoid(s[sel], result.freq[sel]))


def harmonic_weights(
    result: SpectrumResult, q_max: int, omega: float, component: str = "coherent"
) -> np.ndarray:
    return np.array(
        [harmonic_weight(result, q, omega, component) for q in range(1, q_max + 1)]
    )
