import numpy as np
import pytest

from hhgcat import dipole as dp
from hhgcat import hhg, squeezing as sq
from hhgcat.dipole import DipoleSignal, mean_field_dipole
from hhgcat.errors import (
    BasisTooSmall,
    InvalidCovariance,
    MissingTransitionDipoles,
    StepTooLarge,
)
from hhgcat.states import GaussianState

from _oracles import (
    exact_two_mode_state,
    ladder,
    partial_transpose_negativity,
    two_mode_covariance,
)

MODES = (1, 2)
OMEGA1 = 1.0


def _direct_commutator(signal, g, omega, modes, t1, t2, cutoff):
    """Matrix commutator of the interaction on the truncated product space."""
    ladders = sq._mode_ladders(cutoff, len(modes))

    def interaction(t):
        d_mat = signal.dij[signal.index_of(t)]
        dim = d_mat.shape[0] * cutoff ** len(modes)
        total = np.zeros((dim, dim), dtype=complex)
        for k, q in enumerate(modes):
            wq = q * omega
            b = ladders[k]
            field = -1j * g * np.sqrt(q) * (
                b.conj().T * np.exp(1j * wq * t) - b * np.exp(-1j * wq * t)
            )
            total += -np.kron(d_mat, field)
        return total

    h1, h2 = interaction(t1), interaction(t2)
    return h1 @ h2 - h2 @ h1


def _interior(matrix, cutoff, n_atom=2, keep=4):
    """Drop matrix elements touching the top Fock levels (truncation edge)."""
    shaped = matrix.reshape(n_atom, cutoff, cutoff, n_atom, cutoff, cutoff)
    return shaped[:, :keep, :keep, :, :keep, :keep]


def test_equal_times_commute(two_level_short):
    t1 = two_level_short.times()[100]
    value = sq.commutator(two_level_short, 0.05, OMEGA1, MODES, t1, t1)
    assert value.max_mixing_coefficient() == 0.0
    assert np.max(np.abs(value.scalar_part)) == 0.0


def test_mean_field_cancels_mode_mixing(two_level_short):
    mf = mean_field_dipole(two_level_short)
    value = sq.commutator(mf, 0.05, OMEGA1, MODES, 1.7, 4.1)
    assert value.max_mixing_coefficient() < 1e-12
    full = sq.commutator(two_level_short, 0.05, OMEGA1, MODES, 1.7, 4.1)
    assert full.max_mixing_coefficient() > 1e-4
    # cross-mode pair-creation coefficients present for q != p
    assert np.max(np.abs(full.coefficient("create_create", 1, 2))) > 1e-6


def test_commutator_matches_direct_matrix_evaluation(two_level_short):
    sig = two_level_short
    cut = 6
    t1 = sig.times()[sig.index_of(1.7)]
    t2 = sig.times()[sig.index_of(4.1)]
    value = sq.commutator(sig, 0.05, OMEGA1, MODES, t1, t2)
    direct = _direct_commutator(sig, 0.05, OMEGA1, MODES, t1, t2, cut)
    diff = _interior(value.assemble(cut) - direct, cut)
    assert np.max(np.abs(diff)) < 1e-10


def test_commutator_antisymmetry_and_antihermiticity(two_level_short):
    sig = two_level_short
    cut = 5
    rng = np.random.default_rng(5)
    times = sig.times()
    for _ in range(3):
        t1, t2 = times[rng.integers(0, sig.n, size=2)]
        forward = sq.commutator(sig, 0.05, OMEGA1, MODES, t1, t2).assemble(cut)
        backward = sq.commutator(sig, 0.05, OMEGA1, MODES, t2, t1).assemble(cut)
        assert np.max(np.abs(_interior(forward + backward, cut, keep=3))) < 1e-10
        assert np.max(np.abs(_interior(forward + forward.conj().T, cut, keep=3))) < 1e-10


def test_commutator_needs_transition_dipoles():
    sig = DipoleSignal(0.0, 0.01, np.zeros(512))
    with pytest.raises(MissingTransitionDipoles):
        sq.commutator(sig, 0.05, OMEGA1, MODES, 0.1, 0.2)


def test_commutator_needs_two_states():
    n = 512
    dij = np.zeros((n, 1, 1), dtype=complex)
    sig = DipoleSignal(0.0, 0.01, np.zeros(n), dij)
    with pytest.raises(BasisTooSmall):
        sq.commutator(sig, 0.05, OMEGA1, (1, 2), 0.1, 0.2)


def test_propagator_mean_field_reduces_to_displacements(two_level_short):
    mf = mean_field_dipole(two_level_short)
    g = 0.0015
    state = sq.quadratic_propagator(mf, g, OMEGA1, MODES)
    assert np.max(np.abs(state.cov - 0.5 * np.eye(4))) < 1e-14
    amps = hhg.compute_chi(two_level_short, g, OMEGA1, 2)
    expected = np.array(
        [np.sqrt(2) * amps.chi[0].real, np.sqrt(2) * amps.chi[1].real,
         np.sqrt(2) * amps.chi[0].imag, np.sqrt(2) * amps.chi[1].imag]
    )
    assert np.max(np.abs(state.mean - expected)) < 1e-8
    # coherent-state fidelity against the displacement-pipeline product state
    fidelity = np.exp(-0.5 * np.sum((state.mean - expected) ** 2))
    assert fidelity > 1.0 - 1e-8


def test_propagator_covariance_matches_fock_oracle(two_level_short):
    errors = {}
    for g in (0.0015, 0.00075):
        state = sq.quadratic_propagator(two_level_short, g, OMEGA1, MODES)
        phi = exact_two_mode_state(two_level_short, g, OMEGA1, MODES, cutoff=15)
        errors[g] = np.max(np.abs(state.cov - two_mode_covariance(phi, cutoff=15)))
    assert errors[0.0015] / errors[0.00075] >= 8.0


def test_propagator_squeezing_detected(two_level_short):
    found = False
    for g in (0.0015, 0.001):
        state = sq.quadratic_propagator(two_level_short, g, OMEGA1, MODES)
        diag = sq.gaussian_diagnostics(state)
        assert diag["min_symplectic_eigenvalue"] >= 0.5 - 1e-10
        if max(diag["squeezing_db"]) > 1e-6:
            found = True
    assert found


def test_propagator_entanglement_flags(two_level_short):
    g = 0.0015
    state = sq.quadratic_propagator(two_level_short, g, OMEGA1, MODES)
    off_block = state.cov[np.ix_([0, 2], [1, 3])]
    assert np.max(np.abs(off_block)) > 1e-8
    en_gauss = sq.log_negativity(state.cov)
    phi = exact_two_mode_state(two_level_short, g, OMEGA1, MODES, cutoff=15)
    en_fock = partial_transpose_negativity(phi, cutoff=15)
    assert en_gauss > 0.0 and en_fock > 0.0
    assert abs(en_gauss - en_fock) / en_fock < 0.05


def test_propagator_order_control(two_level_short):
    with pytest.raises(StepTooLarge):
        sq.quadratic_propagator(two_level_short, 0.08, OMEGA1, MODES)


def test_propagator_step_resolution_guard():
    cfg = dp.PulseConfig(omega=OMEGA1, e0=0.1, envelope="flat", cycles=4)
    sig = dp.solve_two_level(cfg, 1.0, 2.3, dp.TimeGrid.for_pulse(cfg, 256))
    with pytest.raises(StepTooLarge):
        sq.quadratic_propagator(sig, 0.001, OMEGA1, (1, 8))


def test_diagnostics_vacuum():
    state = GaussianState(np.zeros(2), 0.5 * np.eye(2))
    diag = sq.gaussian_diagnostics(state)
    assert abs(diag["squeezing_db"][0]) < 1e-12
    assert diag["purity"] == pytest.approx(1.0, abs=1e-12)
    assert diag["log_negativity"] == {}
    assert diag["physical"]


def test_diagnostics_single_mode_squeezed():
    r = 0.5
    state = GaussianState(np.zeros(2), np.diag([np.exp(-2 * r) / 2, np.exp(2 * r) / 2]))
    diag = sq.gaussian_diagnostics(state)
    assert diag["squeezing_db"][0] == pytest.approx(10 * np.log10(np.exp(2 * r)), abs=1e-10)
    assert diag["squeezing_db"][0] == pytest.approx(4.342944819, abs=1e-6)


def test_diagnostics_two_mode_squeezed():
    r = 0.3
    c, s = np.cosh(2 * r), np.sinh(2 * r)
    cov = 0.5 * np.block(
        [[np.array([[c, s], [s, c]]), np.zeros((2, 2))],
         [np.zeros((2, 2)), np.array([[c, -s], [-s, c]])]]
    )
    state = GaussianState(np.zeros(4), cov)
    diag = sq.gaussian_diagnostics(state)
    assert diag["log_negativity"]["0-1"] == pytest.approx(2 * r, abs=1e-10)
    assert diag["purity"] == pytest.approx(1.0, abs=1e-10)


def test_diagnostics_invalid_covariance():
    bad = GaussianState.__new__(GaussianState)
    object.__setattr__(bad, "mean", np.zeros(2))
    object.__setattr__(bad, "cov", 0.1 * np.eye(2))
    with pytest.raises(InvalidCovariance):
        sq.gaussian_diagnostics(bad)
