"""Command-line front end: configuration, pipelines, reproducible artifacts.

Subcommands drive the library end to end: ``cat-wigner`` (dipole -> mode
amplitudes -> conditioned superposition -> phase space), ``spectrum``
(dipole -> correlations -> coherent/incoherent spectrum), ``squeeze``
(transition dipoles -> quadratic-order Gaussian state), plus ``chi`` and
``phase-avg`` for the intermediate objects.

Configuration is a flat ``key = value`` text file; ``--set key=value``
overrides file entries, which override the built-in defaults.  Exit codes:
0 success, 2 configuration error, 3 numerical/domain failure.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from math import pi
from pathlib import Path

import click
import numpy as np

from . import __version__, coherence, hhg, squeezing, wigner
from . import dipole as dipole_mod
from .errors import HHGCatError, MissingTransitionDipoles
from .output import write_csv, write_manifest

_SCENARIOS = ("two-level", "sfa", "ingest")


def _parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def _parse_complex(raw: str) -> complex:
    return complex(raw.strip().replace(" ", ""))


def _parse_floats(raw: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in raw.split(",") if tok.strip())


#: key -> (parser, default); the single source of truth for RunConfig fields
KEY_SPECS = {
    "scenario": (str, "two-level"),
    "omega": (float, 0.057),
    "e0": (float, 0.05),
    "envelope": (str, "flat"),
    "cycles": (float, 16.0),
    "cep": (float, 0.0),
    "second_color_amplitude": (float, 0.0),
    "second_color_phase": (float, 0.0),
    "samples_per_cycle": (int, 1024),
    "dipole_moment": (float, 1.0),
    "level_splitting": (float, 0.9),
    "ionization_potential": (float, 0.5),
    "sfa_epsilon": (float, dipole_mod.SFA_EPSILON),
    "dipole_path": (str, ""),
    "g": (float, 1e-3),
    "n_modes": (int, 4),
    "alpha": (_parse_complex, 0j),
    "chi1_override": (str, "none"),
    "use_exact_m": (_parse_bool, True),
    "wigner_extent": (float, 6.0),
    "wigner_points": (int, 201),
    "quadrature_phases": (_parse_floats, (0.0, pi / 4, pi / 2)),
    "quadrature_extent": (float, 9.0),
    "quadrature_points": (int, 801),
    "spectrum_qmax": (int, 8),
    "g2_enabled": (_parse_bool, True),
    "g2_q": (int, 1),
    "g2_base_cycles": (float, 2.0),
    "g2_tau_cycles": (float, 8.0),
    "g2_points": (int, 257),
    "squeeze_modes": (int, 2),
    "mean_field": (_parse_bool, False),
    "alpha_mod": (float, 1.0),
    "seed": (int, 0),
}


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    """Validated run parameters; see KEY_SPECS for the full key set."""

    values: dict

    def __getattr__(self, name):
        try:
            return self.values[name]
        except KeyError as err:
            raise AttributeError(name) from err

    @property
    def chi1(self) -> complex | None:
        raw = self.values["chi1_override"]
        if raw in ("none", ""):
            return None
        return _parse_complex(raw)


def load_config(path: str | None, overrides: tuple[str, ...]) -> RunConfig:
    values = {k: default for k, (_, default) in KEY_SPECS.items()}
    if path:
        for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, _, val = line.partition("=")
            _apply(values, key.strip(), val.strip(), f"{path}:{lineno}")
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set {item!r}: expected key=value")
        key, _, val = item.partition("=")
        _apply(values, key.strip(), val.strip(), f"--set {key.strip()}")
    _validate(values)
    return RunConfig(values)


def _apply(values: dict, key: str, val: str, where: str):
    if key not in KEY_SPECS:
        raise ConfigError(f"{where}: unknown key {key!r}")
    parser, _ = KEY_SPECS[key]
    try:
        values[key] = parser(val)
    except (ValueError, TypeError) as err:
        raise ConfigError(f"{where}: bad value for {key}: {err}") from err


def _validate(values: dict):
    if values["scenario"] not in _SCENARIOS:
        raise ConfigError(f"scenario must be one of {_SCENARIOS}")
    if values["omega"] <= 0:
        raise ConfigError("omega must be positive")
    if values["e0"] < 0:
        raise ConfigError("e0 must be nonnegative")
    if values["cycles"] < 1:
        raise ConfigError("cycles must be >= 1")
    if values["envelope"] not in dipole_mod.ENVELOPES:
        raise ConfigError(f"envelope must be one of {dipole_mod.ENVELOPES}")
    if values["n_modes"] < 2:
        raise ConfigError("n_modes must be >= 2")
    if values["squeeze_modes"] < 2:
        raise ConfigError("squeeze_modes must be >= 2")
    if values["samples_per_cycle"] < 16:
        raise ConfigError("samples_per_cycle must be >= 16")
    if values["wigner_points"] < 11 or values["quadrature_points"] < 11:
        raise ConfigError("grids need at least 11 points")
    if values["scenario"] == "ingest":
        path = values["dipole_path"]
        if not path:
            raise ConfigError("ingest scenario needs dipole_path")
        if not Path(path).exists():
            raise ConfigError(f"dipole_path does not exist: {path}")
    if values["chi1_override"] not in ("none", ""):
        try:
            _parse_complex(values["chi1_override"])
        except ValueError as err:
            raise ConfigError(f"chi1_override: {err}") from err


def build_pulse(cfg: RunConfig) -> dipole_mod.PulseConfig:
    return dipole_mod.PulseConfig(
        omega=cfg.omega,
        e0=cfg.e0,
        envelope=cfg.envelope,
        cycles=cfg.cycles,
        cep=cfg.cep,
        second_color_amplitude=cfg.second_color_amplitude,
        second_color_phase=cfg.second_color_phase,
    )


def build_dipole(cfg: RunConfig) -> dipole_mod.DipoleSignal:
    if cfg.scenario == "ingest":
        return dipole_mod.ingest_dipole(cfg.dipole_path)
    pulse = build_pulse(cfg)
    grid = dipole_mod.TimeGrid.for_pulse(pulse, cfg.samples_per_cycle)
    if cfg.scenario == "two-level":
        sig = dipole_mod.solve_two_level(pulse, cfg.dipole_moment, cfg.level_splitting, grid)
    else:
        sig = dipole_mod.solve_sfa(pulse, cfg.ionization_potential, grid, epsilon=cfg.sfa_epsilon)
    if cfg.mean_field and sig.dij is not None:
        sig = dipole_mod.mean_field_dipole(sig)
    return sig


def _mode_amplitudes(cfg: RunConfig) -> hhg.ModeAmplitudes:
    if cfg.chi1 is not None and cfg.scenario == "two-level" and cfg.e0 == 0.0:
        # pure override: no dipole needed, harmonics stay empty
        chi = np.zeros(cfg.n_modes, dtype=complex)
        amplitudes = hhg.ModeAmplitudes(cfg.g, cfg.omega, chi)
        return amplitudes.with_chi1(cfg.chi1)
    amplitudes = hhg.compute_chi(build_dipole(cfg), cfg.g, cfg.omega, cfg.n_modes)
    if cfg.chi1 is not None:
        amplitudes = amplitudes.with_chi1(cfg.chi1)
    return amplitudes


@click.group()
@click.version_option(version=__version__, prog_name="hhgcat")
def main():
    """Quantum-optical pipeline for strong-field harmonic emission."""


def _common(fn):
    fn = click.option("--config", "config_path", type=click.Path(), default=None,
                      help="flat key = value configuration file")(fn)
    fn = click.option("--out", "out_dir", type=click.Path(), default="out",
                      help="output directory (created if missing)")(fn)
    fn = click.option("--set", "overrides", multiple=True, metavar="KEY=VALUE",
                      help="override one configuration key")(fn)
    return fn


def _run(command, fn, config_path, out_dir, overrides):
    try:
        cfg = load_config(config_path, overrides)
    except ConfigError as err:
        click.echo(f"configuration error: {err}", err=True)
        sys.exit(2)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        extra = fn(cfg, out)
    except HHGCatError as err:
        click.echo(f"{type(err).__name__}: {err}", err=True)
        sys.exit(3)
    write_manifest(out / "manifest.json", command, cfg.values, out,
                   dict(wigner.CONVENTION), __version__, extra)
    click.echo(f"wrote {out}/manifest.json")


@main.command("cat-wigner")
@_common
def cat_wigner_cmd(config_path, out_dir, overrides):
    """Conditioned superposition: Wigner grid and homodyne distributions."""
    _run("cat-wigner", _cat_wigner, config_path, out_dir, overrides)


def _cat_wigner(cfg: RunConfig, out: Path) -> dict:
    amplitudes = _mode_amplitudes(cfg)
    labels = (complex(cfg.alpha),) + (0.0j,) * (cfg.n_modes - 1)
    shifted = hhg.apply_hhg(hhg.ProductCoherent(labels), amplitudes)
    result = hhg.condition_on_harmonics(shifted, cfg.alpha, use_exact_m=cfg.use_exact_m)
    cat = result.relative_cat()

    axis = np.linspace(-cfg.wigner_extent, cfg.wigner_extent, cfg.wigner_points)
    grid = wigner.wigner_of(cat, axis)
    rows = ((x, p, grid.values[i, j]) for i, x in enumerate(grid.x) for j, p in enumerate(grid.p))
    write_csv(out / "wigner.csv", ["x", "p", "w"], rows)

    qaxis = np.linspace(-cfg.quadrature_extent, cfg.quadrature_extent, cfg.quadrature_points)
    qrows = []
    for phase in cfg.quadrature_phases:
        pdf = wigner.quadrature_pdf(cat, phase, qaxis)
        qrows.extend((phase, x, v) for x, v in zip(pdf.x, pdf.pdf))
    write_csv(out / "quadratures.csv", ["phi", "x", "pdf"], qrows)
    return {
        "frame": "relative (displaced by -alpha)",
        "chi1": [cat.labels[0].real, cat.labels[0].imag],
        "harmonic_tail_sum": amplitudes.tail_sum,
        "success_probability": result.success_probability,
        "complement_probability": result.complement_probability,
        "exact_operator_used": result.exact_operator_used,
        "wigner_min": float(grid.values.min()),
        "wigner_integral": grid.integral(),
    }


@main.command("spectrum")
@_common
def spectrum_cmd(config_path, out_dir, overrides):
    """Coherent/incoherent emission spectrum and field correlations."""
    _run("spectrum", _spectrum, config_path, out_dir, overrides)


def _spectrum(cfg: RunConfig, out: Path) -> dict:
    sig = build_dipole(cfg)
    res = coherence.spectrum(sig, cfg.g, cfg.spectrum_qmax, cfg.omega)
    write_csv(
        out / "spectrum.csv",
        ["freq", "s_coherent", "s_incoherent"],
        zip(res.freq, res.s_coherent, res.s_incoherent),
    )

    period = 2 * pi / cfg.omega
    tau = np.linspace(0.0, min(4.0, cfg.cycles / 4) * period, 257)
    mode = "full" if sig.dij is not None else "coherent_only"
    series = coherence.g1(sig, cfg.g, 1, cfg.omega, res.window.t_base, tau, mode=mode)
    g1_rows = []
    for k, t_k in enumerate(series.tau):
        row = [t_k, series.values[k].real, series.values[k].imag]
        if series.incoherent is not None:
            row += [series.incoherent[k].real, series.incoherent[k].imag]
        else:
            row += [0.0, 0.0]
        g1_rows.append(row)
    write_csv(out / "g1.csv", ["tau", "re_g1", "im_g1", "re_incoherent", "im_incoherent"], g1_rows)

    notes = {}
    if cfg.g2_enabled and sig.dij is not None:
        tau2 = np.linspace(0.0, cfg.g2_tau_cycles * period, cfg.g2_points)
        g2_series = coherence.g2(sig, cfg.g, cfg.g2_q, cfg.omega,
                                 cfg.g2_base_cycles * period, tau2)
        write_csv(out / "g2.csv", ["tau", "g2"], zip(g2_series.tau, g2_series.values))
        notes["g2_zero_delay"] = float(g2_series.values[0])
        notes["antibunched"] = bool(g2_series.values[0] < g2_series.values[1:].min())
    elif cfg.g2_enabled:
        notes["g2_omitted"] = "transition dipoles unavailable for this scenario"
    return {
        "window": {"t_base": res.window.t_base, "tau_max": res.window.tau_max,
                   "taper": res.window.taper},
        "spectrum_diagnostics": res.diagnostics,
        **notes,
    }


@main.command("squeeze")
@_common
def squeeze_cmd(config_path, out_dir, overrides):
    """Quadratic-order Gaussian state: covariance and diagnostics."""
    _run("squeeze", _squeeze, config_path, out_dir, overrides)


def _squeeze(cfg: RunConfig, out: Path) -> dict:
    sig = build_dipole(cfg)
    if sig.dij is None:
        raise MissingTransitionDipoles(
            "squeeze needs a scenario with transition dipoles (two-level or ingested dij)"
        )
    modes = tuple(range(1, cfg.squeeze_modes + 1))
    state = squeezing.quadratic_propagator(sig, cfg.g, cfg.omega, modes)
    diag = squeezing.gaussian_diagnostics(state)

    rows = [("mean", i, "", v) for i, v in enumerate(state.mean)]
    rows += [
        ("cov", i, j, state.cov[i, j])
        for i in range(state.cov.shape[0])
        for j in range(state.cov.shape[1])
    ]
    write_csv(out / "covariance.csv", ["kind", "i", "j", "value"], rows)

    diag_out = {
        "squeezing_db": diag["squeezing_db"],
        "log_negativity": diag["log_negativity"],
        "purity": diag["purity"],
        "min_symplectic_eigenvalue": diag["min_symplectic_eigenvalue"],
        "physical": diag["physical"],
        "modes": list(modes),
        "mean_field": cfg.mean_field,
    }
    (out / "diagnostics.json").write_text(
        json.dumps(diag_out, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return {"diagnostics": diag_out}


@main.command("chi")
@_common
def chi_cmd(config_path, out_dir, overrides):
    """Per-mode displacement amplitudes from the dipole signal."""
    _run("chi", _chi, config_path, out_dir, overrides)


def _chi(cfg: RunConfig, out: Path) -> dict:
    amplitudes = _mode_amplitudes(cfg)
    write_csv(
        out / "chi.csv",
        ["q", "re_chi", "im_chi", "abs_chi"],
        ((q, amplitudes.chi[q - 1].real, amplitudes.chi[q - 1].imag, abs(amplitudes.chi[q - 1]))
         for q in range(1, amplitudes.n_modes + 1)),
    )
    return {"tail_sum": amplitudes.tail_sum}


@main.command("phase-avg")
@_common
def phase_avg_cmd(config_path, out_dir, overrides):
    """Carrier-phase-averaged driving state: number weights, zero mean field."""
    _run("phase-avg", _phase_avg, config_path, out_dir, overrides)


def _phase_avg(cfg: RunConfig, out: Path) -> dict:
    mixture = hhg.phase_average(cfg.alpha_mod)
    write_csv(out / "phase_avg.csv", ["n", "weight"],
              ((n, w) for n, w in enumerate(mixture.weights)))
    period = 2 * pi / cfg.omega
    sample_t = np.linspace(0.0, period, 9)
    field = hhg.classical_field(mixture, cfg.g, cfg.omega, sample_t)
    return {
        "mean_photon": mixture.mean_photon,
        "classical_field_max_abs": float(np.max(np.abs(field))),
    }


if __name__ == "__main__":
    main()
