import numpy as np
import pytest

from hhgcat import hhg, states
from hhgcat.dipole import DipoleSignal
from hhgcat.errors import (
    DegenerateSuperposition,
    GridTooCoarse,
    ModeCountMismatch,
    UnsupportedVariant,
)

from _oracles import angular_average_density
from conftest import OMEGA, tone_signal


def test_chi_of_zero_dipole():
    n = 2049
    sig = DipoleSignal(0.0, 0.01, np.zeros(n))
    amps = hhg.compute_chi(sig, 0.1, 2 * np.pi / (0.01 * (n - 1) / 8), 4)
    assert np.all(amps.chi == 0.0)


def test_chi_pure_tone():
    omega, g = 0.4, 3e-2
    sig = tone_signal(omega=omega, harmonic=3, cycles=16, samples_per_cycle=512)
    total_time = sig.dt * (sig.n - 1)
    amps = hhg.compute_chi(sig, g, omega, 6)
    assert abs(abs(amps.chi_q(3)) - g * total_time / 2) < 1e-9 * g * total_time
    others = [abs(amps.chi_q(q)) for q in (1, 2, 4, 5, 6)]
    assert max(others) < 1e-10 * abs(amps.chi_q(3))


def test_chi_two_level_parity(two_level_64):
    amps = hhg.compute_chi(two_level_64, 1e-3, OMEGA, 8)
    odd = sum(abs(amps.chi_q(q)) ** 2 for q in (1, 3, 5, 7))
    even = sum(abs(amps.chi_q(q)) ** 2 for q in (2, 4, 6, 8))
    assert even / odd < 1e-6


def test_chi_grid_guard():
    sig = tone_signal(omega=0.4, harmonic=1, cycles=4, samples_per_cycle=32)
    with pytest.raises(GridTooCoarse):
        hhg.compute_chi(sig, 1.0, 0.4, 8)


def test_apply_hhg_identity_and_labels():
    amps = hhg.ModeAmplitudes(1.0, OMEGA, np.zeros(3, dtype=complex))
    state = hhg.ProductCoherent((1.5, 0.0, 0.0))
    assert hhg.apply_hhg(state, amps).labels == state.labels

    amps = hhg.ModeAmplitudes(1.0, OMEGA, np.array([0.3, 0.2j, 0.1]))
    shifted = hhg.apply_hhg(hhg.ProductCoherent((2.0, 0.0, 0.0)), amps)
    assert shifted.labels == (2.3, 0.2j, 0.1)
    # Fock-space oracle for the fundamental-mode displacement
    direct = states.displace(states.to_fock(states.CoherentLabel(2.0), 64), 0.3)
    target = states.to_fock(states.CoherentLabel(2.3), 64)
    assert states.fidelity(direct, target) > 1.0 - 1e-9
    # harmonic occupation equals the squared displacement amplitude
    mode2 = states.to_fock(states.CoherentLabel(shifted.labels[1]), 32)
    assert abs(states.mean_photon(mode2) - 0.04) < 1e-10


def test_apply_hhg_mode_count_guard():
    amps = hhg.ModeAmplitudes(1.0, OMEGA, np.zeros(3, dtype=complex))
    with pytest.raises(ModeCountMismatch):
        hhg.apply_hhg(hhg.ProductCoherent((1.0, 0.0)), amps)


def _conditioned(chi1, tail_amp=0.0, alpha=0.0, exact=True, n_modes=3):
    chi = np.full(n_modes, tail_amp, dtype=complex)
    chi[0] = chi1
    amps = hhg.ModeAmplitudes(1.0, OMEGA, chi)
    labels = (complex(alpha),) + (0.0j,) * (n_modes - 1)
    shifted = hhg.apply_hhg(hhg.ProductCoherent(labels), amps)
    return hhg.condition_on_harmonics(shifted, alpha, use_exact_m=exact)


def test_condition_no_shift_exact_measurement():
    res = _conditioned(0.0, tail_amp=0.4, exact=True)
    cat = res.cat
    # both branches carry the same label: still the unshifted coherent state
    assert cat.labels == (0.0, 0.0)
    tail = 2 * 0.4**2
    xi = np.exp(-tail)
    assert abs(res.success_probability - (1 - xi) ** 2) < 1e-12
    assert res.success_probability < 0.5


def test_condition_kitten_fidelity():
    res = _conditioned(0.1, tail_amp=0.05)
    vec = states.to_fock(res.relative_cat(), 32)
    assert states.fidelity(vec, states.fock_basis_state(1, 32)) > 0.99


def test_condition_cat_overlap_and_norm():
    res = _conditioned(1.0, tail_amp=0.0, exact=False)
    assert abs(abs(res.cat.branch_overlap()) - np.exp(-0.5)) < 1e-12
    raw = hhg.CoherentSuperposition(res.raw_coefficients, res.cat.labels)
    oracle_norm = states.to_fock(raw, 64).norm()
    assert abs(oracle_norm - np.sqrt(1 - np.exp(-1.0))) < 1e-10
    assert abs(1 / raw.norm() - 1 / np.sqrt(1 - np.exp(-1.0))) < 1e-10


def test_condition_degenerate_projector():
    with pytest.raises(DegenerateSuperposition):
        _conditioned(0.0, tail_amp=0.1, exact=False)


def test_exact_measurement_converges_to_projector():
    distances = []
    for tail_sum in (1e-1, 1e-2, 1e-3):
        tail_amp = np.sqrt(tail_sum / 2)
        exact = states.to_fock(_conditioned(0.5, tail_amp).relative_cat(), 48)
        proj = states.to_fock(_conditioned(0.5, tail_amp, exact=False).relative_cat(), 48)
        distances.append(np.sqrt(max(0.0, 1.0 - states.fidelity(exact, proj))))
    assert distances[0] > distances[1] > distances[2]


def test_frame_covariance():
    alpha = 0.6 + 0.4j
    res = _conditioned(0.8, tail_amp=0.1, alpha=alpha)
    absolute = states.to_fock(res.cat, 64)
    relative = states.to_fock(res.relative_cat(), 64)
    lifted = states.displace(relative, alpha)
    assert states.fidelity(absolute, lifted) > 1.0 - 1e-9


def test_measurement_operator_bounded():
    rng = np.random.default_rng(3)
    m = hhg.measurement_operator_matrix(0.7 + 0.1j, 0.02, 48)
    mm = m.conj().T @ m
    eigs = np.linalg.eigvalsh(mm)
    assert eigs.min() > -1e-12 and eigs.max() < 1.0 + 1e-12
    for _ in range(20):
        psi = rng.normal(size=48) + 1j * rng.normal(size=48)
        psi /= np.linalg.norm(psi)
        val = float(np.real(psi.conj() @ mm @ psi))
        assert -1e-12 <= val <= 1.0 + 1e-12


def test_phase_average_weights():
    assert hhg.phase_average(0.0).weights.tolist() == [1.0]
    mix = hhg.phase_average(1.0)
    assert abs(mix.weights[0] - np.exp(-1.0)) < 1e-15
    assert abs(mix.weights[1] - np.exp(-1.0)) < 1e-15


def test_phase_average_moments():
    for amp in (0.7, 1.0, 1.9):
        mix = hhg.phase_average(amp)
        n = np.arange(mix.weights.size)
        mean = float(n @ mix.weights)
        var = float((n - mean) ** 2 @ mix.weights)
        assert abs(mean - amp**2) < 1e-10 * amp**2
        assert abs(var - amp**2) < 1e-10 * amp**2


def test_phase_average_matches_angular_quadrature():
    rho = angular_average_density(1.0, 10_000, 32)
    mix = hhg.phase_average(1.0)
    off_diag = rho - np.diag(np.diag(rho))
    assert np.max(np.abs(off_diag)) < 1e-3
    diag = np.real(np.diag(rho))
    assert np.max(np.abs(diag[: mix.weights.size] - mix.weights)) < 1e-3


def test_classical_field_of_coherent_state():
    g, alpha = 0.02, 1.4
    state = hhg.ProductCoherent((alpha,))
    assert abs(hhg.classical_field(state, g, OMEGA, 0.0)[0]) < 1e-15
    t_quarter = np.pi / (2 * OMEGA)
    val = hhg.classical_field(state, g, OMEGA, t_quarter)[0]
    assert abs(val - 2 * g * alpha) < 1e-12
    assert np.all(hhg.classical_field(hhg.ProductCoherent((0.0,)), g, OMEGA,
                                      np.linspace(0, 50, 7)) == 0.0)


def test_classical_field_of_mixture_vanishes():
    mix = hhg.phase_average(2.0)
    t = np.linspace(0.0, 400.0, 23)
    assert np.all(hhg.classical_field(mix, 0.1, OMEGA, t) == 0.0)


def test_classical_field_rejects_gaussian():
    gauss = states.GaussianState(np.zeros(2), 0.5 * np.eye(2))
    with pytest.raises(UnsupportedVariant):
        hhg.classical_field(gauss, 0.1, OMEGA, 0.0)
