"""Time-dependent dipole signals of a driven atom.

Two built-in models (a two-level atom with an exact unitary integrator, and
a single-active-electron strong-field dipole with a plateau/cutoff spectrum)
plus CSV ingestion, so the downstream field pipeline never depends on one
atomic model.  All quantities are atomic units.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import pi, sqrt

import numpy as np
from scipy.integrate import cumulative_trapezoid

from . import _kernels
from .errors import (
    GridTooCoarse,
    NonFiniteState,
    NonFiniteValue,
    NonUniformGrid,
    ParameterOutOfRange,
    ParseError,
)

ENVELOPES = ("flat", "sin2", "gaussian")

#: regularization of the bound-continuum denominator in the strong-field integral
SFA_EPSILON = 1e-4


@dataclass(frozen=True)
class PulseConfig:
    """Classical driving field: carrier, envelope and optional second color.

    ``second_color_amplitude`` adds a 2*omega component (relative amplitude);
    its phase is relative to the doubled carrier phase.
    """

    omega: float
    e0: float
    envelope: str = "flat"
    cycles: float = 8.0
    cep: float = 0.0
    second_color_amplitude: float = 0.0
    second_color_phase: float = 0.0

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError("omega must be positive")
        if self.e0 < 0:
            raise ValueError("e0 must be nonnegative")
        if self.cycles < 1:
            raise ValueError("duration must be at least one cycle")
        if self.envelope not in ENVELOPES:
            raise ValueError(f"envelope must be one of {ENVELOPES}")

    @property
    def period(self) -> float:
        return 2 * pi / self.omega

    @property
    def duration(self) -> float:
        return self.cycles * self.period

    def envelope_at(self, t):
        t = np.asarray(t, dtype=float)
        total = self.duration
        if self.envelope == "flat":
            return np.ones_like(t)
        if self.envelope == "sin2":
            return np.sin(pi * t / total) ** 2
        fwhm = total / 2.0
        return np.exp(-4.0 * np.log(2.0) * (t - total / 2.0) ** 2 / fwhm**2)

    def field_at(self, t):
        """Electric field E(t) on the given times."""
        t = np.asarray(t, dtype=float)
        carrier = np.cos(self.omega * t + self.cep)
        if self.second_color_amplitude:
            carrier = carrier + self.second_color_amplitude * np.cos(
                2 * self.omega * t + 2 * self.cep + self.second_color_phase
            )
        return self.e0 * self.envelope_at(t) * carrier


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid t0 + k*dt, k = 0..n-1."""

    t0: float
    dt: float
    n: int

    def __post_init__(self):
        if self.dt <= 0 or self.n < 2:
            raise ValueError("need dt > 0 and at least two samples")

    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n)

    @property
    def span(self) -> float:
        return self.dt * (self.n - 1)

    @classmethod
    def for_pulse(cls, config: PulseConfig, samples_per_cycle: int = 512) -> "TimeGrid":
        n_cycles = config.cycles
        n = int(round(n_cycles * samples_per_cycle)) + 1
        return cls(0.0, config.period / samples_per_cycle, n)


@dataclass(frozen=True)
class DipoleSignal:
    """Sampled dipole expectation, optionally with the transition-dipole matrix.

    ``dij`` has shape (n, m, m): the full dipole operator in the frame of the
    driven atom, with element (0, 0) the ground-state expectation.
    """

    t0: float
    dt: float
    d: np.ndarray
    dij: np.ndarray | None = None

    def __post_init__(self):
        d = np.asarray(self.d, dtype=np.float64)
        if d.ndim != 1 or d.size < 2:
            raise ValueError("d must be a vector with at least two samples")
        if not np.all(np.isfinite(d)):
            raise NonFiniteValue("dipole samples contain NaN/Inf")
        d.setflags(write=False)
        object.__setattr__(self, "d", d)
        if self.dij is not None:
            dij = np.asarray(self.dij, dtype=np.complex128)
            if dij.ndim != 3 or dij.shape[0] != d.size or dij.shape[1] != dij.shape[2]:
                raise ValueError("dij must have shape (n, m, m)")
            if not np.all(np.isfinite(dij)):
                raise NonFiniteValue("transition dipoles contain NaN/Inf")
            dij.setflags(write=False)
            object.__setattr__(self, "dij", dij)

    @property
    def n(self) -> int:
        return self.d.size

    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n)

    @property
    def basis_size(self) -> int | None:
        return None if self.dij is None else self.dij.shape[1]

    def index_of(self, t: float) -> int:
        """Nearest grid index of t; raises when t falls outside the grid."""
        from .errors import OutOfGridRange

        k = round((t - self.t0) / self.dt)
        if k < 0 or k >= self.n or abs(self.t0 + k * self.dt - t) > 0.5 * self.dt + 1e-12:
            raise OutOfGridRange(f"t = {t} outside sampled range")
        return int(k)


def mean_field_dipole(signal: DipoleSignal) -> DipoleSignal:
    """Suppress dipole correlations: keep only the ground-state expectation.

    The returned signal has the same expectation but a transition-dipole
    matrix with the (0, 0) element alone, which is the classical-current
    (mean-field) factorization.
    """
    m = signal.basis_size or 2
    dij = np.zeros((signal.n, m, m), dtype=np.complex128)
    dij[:, 0, 0] = signal.d
    return DipoleSignal(signal.t0, signal.dt, signal.d, dij)


def _su2_exponential(h: np.ndarray, s: float) -> np.ndarray:
    """exp(-i s H) for Hermitian 2x2 H, via the Pauli decomposition."""
    c0 = 0.5 * (h[0, 0].real + h[1, 1].real)
    vz = 0.5 * (h[0, 0].real - h[1, 1].real)
    vx = h[0, 1].real
    vy = -h[0, 1].imag
    r = sqrt(vx * vx + vy * vy + vz * vz)
    phase = np.exp(-1j * s * c0)
    if r == 0.0:
        return phase * np.eye(2, dtype=np.complex128)
    cosr = np.cos(s * r)
    sinr = np.sin(s * r) / r
    return phase * np.array(
        [
            [cosr - 1j * sinr * vz, -1j * sinr * (vx - 1j * vy)],
            [-1j * sinr * (vx + 1j * vy), cosr + 1j * sinr * vz],
        ],
        dtype=np.complex128,
    )


# fourth-order commutator-free scheme: two Gauss nodes, two exact exponentials
_CF4_NODE1 = 0.5 - sqrt(3.0) / 6.0
_CF4_NODE2 = 0.5 + sqrt(3.0) / 6.0
_CF4_A1 = 0.25 + sqrt(3.0) / 6.0
_CF4_A2 = 0.25 - sqrt(3.0) / 6.0


def solve_two_level(
    config: PulseConfig,
    dipole_matrix_element: float,
    level_splitting: float,
    grid: TimeGrid,
) -> DipoleSignal:
    """Drive a two-level atom and return <d(t)> plus the 2x2 dipole matrix.

    The propagator is advanced with a fixed-step fourth-order commutator-free
    exponential scheme, so the state norm is conserved to machine precision.
    The returned ``dij`` is the dipole operator conjugated by the propagator,
    i.e. the driven-frame (interaction-picture) transition dipole series.
    """
    d0 = float(dipole_matrix_element)
    delta = float(level_splitting)
    rabi = abs(d0 * config.e0)
    fastest = max(config.omega, 2 * config.omega if config.second_color_amplitude else 0.0,
                  abs(delta), rabi)
    if fastest > 0 and grid.dt > (2 * pi / fastest) / 40.0:
        raise GridTooCoarse(
            f"dt = {grid.dt:.3e} gives fewer than 40 samples on the fastest period"
        )

    dip = np.array([[0.0, d0], [d0, 0.0]], dtype=np.complex128)
    times = grid.times()
    u = np.eye(2, dtype=np.complex128)
    d_exp = np.empty(grid.n)
    dij = np.empty((grid.n, 2, 2), dtype=np.complex128)

    def record(k, u_now):
        m = u_now.conj().T @ dip @ u_now
        dij[k] = m
        d_exp[k] = m[0, 0].real

    record(0, u)
    dt = grid.dt
    for k in range(grid.n - 1):
        t = times[k]
        e1 = config.field_at(t + _CF4_NODE1 * dt)
        e2 = config.field_at(t + _CF4_NODE2 * dt)
        h1 = np.array([[0.0, -d0 * e1], [-d0 * e1, delta]], dtype=np.complex128)
        h2 = np.array([[0.0, -d0 * e2], [-d0 * e2, delta]], dtype=np.complex128)
        u = (
            _su2_exponential(_CF4_A2 * h1 + _CF4_A1 * h2, dt)
            @ _su2_exponential(_CF4_A1 * h1 + _CF4_A2 * h2, dt)
            @ u
        )
        record(k + 1, u)

    if not np.all(np.isfinite(d_exp)):
        raise NonFiniteState("two-level integration produced non-finite values")
    norm_drift = max(abs(np.linalg.norm(u[:, 0]) - 1.0), abs(np.linalg.norm(u[:, 1]) - 1.0))
    if norm_drift > 1e-8:
        raise NonFiniteState(f"propagator lost unitarity by {norm_drift:.2e}")
    return DipoleSignal(grid.t0, grid.dt, d_exp, dij)


def solve_sfa(
    config: PulseConfig,
    ionization_potential: float,
    grid: TimeGrid,
    epsilon: float = SFA_EPSILON,
    lookback_cycles: float | None = None,
) -> DipoleSignal:
    """Single-active-electron strong-field dipole by direct double-time integration.

    The ionization-time integral runs over the full history by default
    (``lookback_cycles`` truncates it); the quadratic-phase denominator is
    regularized by ``epsilon``.  The spectrum of the result shows the
    plateau/cutoff structure at 3.17 Up + Ip.
    """
    ip = float(ionization_potential)
    if ip <= 0:
        raise ParameterOutOfRange("ionization potential must be positive")
    if config.e0 == 0.0:
        return DipoleSignal(grid.t0, grid.dt, np.zeros(grid.n))
    up = config.e0**2 / (4 * config.omega**2)
    cutoff_harmonic = (3.17 * up + ip) / config.omega
    samples_per_cycle = config.period / grid.dt
    if samples_per_cycle < 4 * cutoff_harmonic:
        raise ParameterOutOfRange(
            f"grid resolves only {samples_per_cycle:.0f} samples/cycle; "
            f"need >= {4 * cutoff_harmonic:.0f} for the predicted cutoff"
        )

    times = grid.times()
    e_field = config.field_at(times)
    a_field = -cumulative_trapezoid(e_field, dx=grid.dt, initial=0.0)
    a_int = cumulative_trapezoid(a_field, dx=grid.dt, initial=0.0)
    a2_int = cumulative_trapezoid(a_field**2, dx=grid.dt, initial=0.0)
    lookback = grid.n if lookback_cycles is None else int(round(lookback_cycles * samples_per_cycle))
    d = _kernels.sfa_dipole(e_field, a_field, a_int, a2_int, grid.dt, ip, epsilon, lookback)
    if not np.all(np.isfinite(d)):
        raise NonFiniteState("strong-field integration produced non-finite values")
    return DipoleSignal(grid.t0, grid.dt, d)


# ---------------------------------------------------------------------------
# CSV ingestion / export
#
# Format: header "t,d" or "t,d,re_d00,im_d00,re_d01,im_d01,..." (row-major
# basis pairs), one row per sample, atomic units.  An optional comment line
# "# t0=<float> dt=<float>" pins the grid exactly for bitwise round-trips.
# ---------------------------------------------------------------------------


def write_dipole(signal: DipoleSignal, path) -> None:
    """Export a dipole signal to CSV (17 significant digits)."""
    cols = ["t", "d"]
    m = signal.basis_size
    if m:
        for i in range(m):
            for j in range(m):
                cols += [f"re_d{i}{j}", f"im_d{i}{j}"]
    lines = [f"# t0={signal.t0!r} dt={signal.dt!r}", ",".join(cols)]
    times = signal.times()
    for k in range(signal.n):
        row = [f"{times[k]:.17g}", f"{signal.d[k]:.17g}"]
        if m:
            flat = signal.dij[k].ravel()
            for z in flat:
                row += [f"{z.real:.17g}", f"{z.imag:.17g}"]
        lines.append(",".join(row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def ingest_dipole(path) -> DipoleSignal:
    """Read and validate a dipole CSV; see the module-level format note."""
    meta_t0 = meta_dt = None
    rows = []
    header = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = dict(
                    tok.split("=", 1) for tok in line[1:].split() if "=" in tok
                )
                if "t0" in parts and "dt" in parts:
                    try:
                        meta_t0, meta_dt = float(parts["t0"]), float(parts["dt"])
                    except ValueError as err:
                        raise ParseError(f"line {lineno}: bad grid metadata") from err
                continue
            if header is None:
                header = [c.strip() for c in line.split(",")]
                if header[:2] != ["t", "d"]:
                    raise ParseError(f"line {lineno}: header must start with 't,d'")
                extra = len(header) - 2
                if extra % 2:
                    raise ParseError("transition-dipole columns must come in re/im pairs")
                m2 = extra // 2
                m = int(round(sqrt(m2))) if m2 else 0
                if m * m != m2:
                    raise ParseError("transition-dipole columns must form a square matrix")
                continue
            fields = line.split(",")
            if len(fields) != len(header):
                raise ParseError(f"line {lineno}: expected {len(header)} fields, got {len(fields)}")
            try:
                values = [float(x) for x in fields]
            except ValueError as err:
                raise ParseError(f"line {lineno}: non-numeric field") from err
            if not np.all(np.isfinite(values)):
                raise NonFiniteValue(f"line {lineno}: non-finite value")
            rows.append(values)
    if header is None or len(rows) < 2:
        raise ParseError("file needs a header and at least two data rows")

    data = np.asarray(rows, dtype=np.float64)
    t = data[:, 0]
    steps = np.diff(t)
    if np.any(steps <= 0):
        raise NonUniformGrid("time column must be strictly increasing")
    dt = meta_dt if meta_dt is not None else (t[-1] - t[0]) / (t.size - 1)
    t0 = meta_t0 if meta_t0 is not None else t[0]
    rel = np.max(np.abs(t - (t0 + dt * np.arange(t.size)))) / dt
    if rel > 1e-9:
        raise NonUniformGrid(f"grid deviates from uniform by {rel:.2e} (relative)")

    d = data[:, 1]
    dij = None
    if data.shape[1] > 2:
        m = int(round(sqrt((data.shape[1] - 2) // 2)))
        re = data[:, 2::2]
        im = data[:, 3::2]
        dij = (re + 1j * im).reshape(data.shape[0], m, m)
    return DipoleSignal(t0, dt, d, dij)
