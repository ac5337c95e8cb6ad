import numpy as np
import pytest

from hhgcat import _kernels, states
from hhgcat.dipole import PulseConfig, TimeGrid, solve_sfa


@pytest.fixture(scope="module")
def backends():
    return _kernels.available_backends()


def test_parity_backends_agree(backends):
    if "compiled" not in backends:
        pytest.skip("compiled extension unavailable")
    rng = np.random.default_rng(2)
    psi = np.zeros(64, dtype=complex)
    psi[:12] = rng.normal(size=12) + 1j * rng.normal(size=12)
    psi /= np.linalg.norm(psi)
    gam = rng.normal(size=200) + 1j * rng.normal(size=200)
    pure = backends["pure"].displaced_parity_grid(psi, gam)
    comp = backends["compiled"].displaced_parity_grid(psi, gam)
    assert np.max(np.abs(pure - comp)) < 1e-12


def test_parity_mixture_mode_agrees(backends):
    weights = np.exp(-1.0) / np.cumprod(np.r_[1.0, np.arange(1, 24)])
    gam = np.linspace(-2, 2, 41) + 0.3j
    results = [
        mod.displaced_parity_grid(None, gam, weights=weights)
        for mod in backends.values()
    ]
    for res in results[1:]:
        assert np.max(np.abs(res - results[0])) < 1e-13


def test_parity_against_exponential_displacement(backends):
    """Laguerre-recurrence displacement vs the matrix-exponential route."""
    rng = np.random.default_rng(9)
    dim = 96
    psi = np.zeros(dim, dtype=complex)
    psi[:12] = rng.normal(size=12) + 1j * rng.normal(size=12)
    psi /= np.linalg.norm(psi)
    state = states.TruncatedFock(psi, dim)
    gam = np.array([0.4 - 0.9j, 1.5, -2.2j])
    parity = np.where(np.arange(dim) % 2 == 0, 1.0, -1.0)
    expected = []
    for g in gam:
        moved = states.displace(state, -g)
        expected.append(float(parity @ (np.abs(moved.amplitudes) ** 2)))
    for mod in backends.values():
        got = mod.displaced_parity_grid(psi, gam)
        assert np.max(np.abs(got - np.asarray(expected))) < 1e-12


def test_sfa_backends_agree(backends):
    if "compiled" not in backends:
        pytest.skip("compiled extension unavailable")
    cfg = PulseConfig(omega=0.057, e0=0.053, envelope="sin2", cycles=4)
    grid = TimeGrid.for_pulse(cfg, 256)
    times = grid.times()
    from scipy.integrate import cumulative_trapezoid

    e_field = cfg.field_at(times)
    a_field = -cumulative_trapezoid(e_field, dx=grid.dt, initial=0.0)
    a_int = cumulative_trapezoid(a_field, dx=grid.dt, initial=0.0)
    a2_int = cumulative_trapezoid(a_field**2, dx=grid.dt, initial=0.0)
    args = (e_field, a_field, a_int, a2_int, grid.dt, 0.5, 1e-4, grid.n)
    pure = backends["pure"].sfa_dipole(*args)
    comp = backends["compiled"].sfa_dipole(*args)
    scale = np.max(np.abs(pure))
    assert np.max(np.abs(pure - comp)) < 1e-12 * scale


def test_solver_uses_active_backend():
    cfg = PulseConfig(omega=0.057, e0=0.053, envelope="sin2", cycles=2)
    sig = solve_sfa(cfg, 0.5, TimeGrid.for_pulse(cfg, 256))
    assert np.any(sig.d != 0.0)
    assert _kernels.BACKEND in ("pure", "compiled")
