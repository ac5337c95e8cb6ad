import numpy as np
import pytest

from hhgcat import hhg, states, wigner
from hhgcat.errors import GridTooSmall, MultiModeUnsupported


def kitten(chi1=0.1, tail=0.05):
    chi = np.array([chi1, tail, tail], dtype=complex)
    amps = hhg.ModeAmplitudes(1.0, 0.057, chi)
    shifted = hhg.apply_hhg(hhg.ProductCoherent((0.0, 0.0, 0.0)), amps)
    return hhg.condition_on_harmonics(shifted, 0.0).relative_cat()


@pytest.fixture(scope="module")
def cat_state():
    return kitten(chi1=1.0, tail=0.05)


def test_vacuum_peak_and_normalization():
    grid = wigner.wigner_of(states.CoherentLabel(0.0))
    center = grid.values[100, 100]
    assert abs(center - 1 / np.pi) < 1e-12
    assert abs(grid.integral() - 1.0) < 1e-6
    assert np.max(grid.values) <= 1 / np.pi + 1e-9
    # isotropy: swapping the axes leaves the grid unchanged
    assert np.max(np.abs(grid.values - grid.values.T)) < 1e-15


def test_kitten_minimum_near_fock_one():
    grid = wigner.wigner_of(kitten())
    assert abs(grid.values.min() - (-1 / np.pi)) < 0.02 / np.pi
    # the minimum sits at the relative-frame origin
    i, j = np.unravel_index(np.argmin(grid.values), grid.values.shape)
    assert abs(grid.x[i]) < 0.3 and abs(grid.p[j]) < 0.3


def test_cat_two_lobes_and_fringes(cat_state):
    axis = np.linspace(-6.0, 6.0, 201)
    grid = wigner.wigner_of(cat_state, axis)
    # two positive lobes along the displacement direction with a negative
    # interference fringe between them (branches overlap at this separation,
    # so the lobes are pushed outward from the branch centers 0 and sqrt(2))
    j0 = np.argmin(np.abs(grid.p))
    profile = grid.values[:, j0]
    peaks = [
        (grid.x[i], profile[i])
        for i in range(1, profile.size - 1)
        if profile[i] > profile[i - 1] and profile[i] > profile[i + 1] and profile[i] > 0
    ]
    assert len(peaks) == 2
    assert peaks[0][0] < 0.0 < np.sqrt(2) < peaks[1][0]
    dips = [
        (grid.x[i], profile[i])
        for i in range(1, profile.size - 1)
        if profile[i] < profile[i - 1] and profile[i] < profile[i + 1]
    ]
    assert len(dips) == 1
    assert peaks[0][0] < dips[0][0] < peaks[1][0] and dips[0][1] < -0.05
    assert grid.values.min() >= -1 / np.pi - 1e-9


def test_cat_closed_form_matches_displaced_parity(cat_state):
    axis = np.linspace(-6.0, 6.0, 101)
    closed = wigner.wigner_of(cat_state, axis)
    oracle = wigner.wigner_oracle(cat_state, axis, dim=128)
    assert np.max(np.abs(closed.values - oracle.values)) < 1e-6


def test_mixture_wigner_laguerre_vs_oracle():
    mix = hhg.phase_average(1.0)
    axis = np.linspace(-5.0, 5.0, 81)
    closed = wigner.wigner_of(mix, axis)
    oracle = wigner.wigner_oracle(mix, axis)
    assert np.max(np.abs(closed.values - oracle.values)) < 1e-7
    assert closed.values.min() > -1e-9  # classical state: no negativity


def test_mixture_rotational_symmetry():
    mix = hhg.phase_average(1.2)
    axis = np.linspace(-6.0, 6.0, 121)
    grid = wigner.wigner_of(mix, axis)
    assert np.max(np.abs(grid.values - grid.values.T)) < 1e-12
    assert np.max(np.abs(grid.values - grid.values[::-1, :])) < 1e-12
    # same radius, different angles: (3, 4) vs (5, 0)
    i3 = np.argmin(np.abs(axis - 3.0))
    i4 = np.argmin(np.abs(axis - 4.0))
    i5 = np.argmin(np.abs(axis - 5.0))
    i0 = np.argmin(np.abs(axis))
    assert abs(grid.values[i3, i4] - grid.values[i5, i0]) < 1e-8


def test_coherent_states_stay_positive():
    grid = wigner.wigner_of(states.CoherentLabel(1.2 - 0.7j))
    assert grid.values.min() >= -1e-9


def test_displacement_covariance():
    beta = 0.9 + 0.4j
    axis = np.linspace(-6.0, 6.0, 241)
    moved = wigner.wigner_of(states.CoherentLabel(beta), axis)
    base = wigner.wigner_of(states.CoherentLabel(0.0), axis)
    dx = np.sqrt(2) * beta.real
    dp = np.sqrt(2) * beta.imag
    shifted = np.exp(-((axis[:, None] - dx) ** 2) - (axis[None, :] - dp) ** 2) / np.pi
    assert np.max(np.abs(moved.values - shifted)) < 1e-12
    assert np.max(np.abs(base.values - np.exp(-(axis[:, None] ** 2) - axis[None, :] ** 2) / np.pi)) < 1e-12


def test_cat_parity_in_momentum(cat_state):
    grid = wigner.wigner_of(cat_state)
    assert np.max(np.abs(grid.values - grid.values[:, ::-1])) < 1e-9


def test_grid_too_small():
    with pytest.raises(GridTooSmall):
        wigner.wigner_of(states.CoherentLabel(3.0), np.linspace(-4, 4, 41))


def test_multimode_rejected():
    with pytest.raises(MultiModeUnsupported):
        wigner.wigner_of(hhg.ProductCoherent((0.3, 0.1)))


def test_quadrature_vacuum():
    pdf = wigner.quadrature_pdf(states.CoherentLabel(0.0), 0.3)
    assert abs(pdf.integral() - 1.0) < 1e-8
    x = pdf.x
    var = float(np.trapezoid(x**2 * pdf.pdf, x))
    assert abs(var - 0.5) < 1e-8


def test_quadrature_coherent_center():
    alpha = 1.1
    pdf = wigner.quadrature_pdf(states.CoherentLabel(alpha), 0.0)
    mean = float(np.trapezoid(pdf.x * pdf.pdf, pdf.x))
    assert abs(mean - np.sqrt(2) * alpha) < 1e-8
    var = float(np.trapezoid((pdf.x - mean) ** 2 * pdf.pdf, pdf.x))
    assert abs(var - 0.5) < 1e-8


def test_quadrature_kitten_node():
    pdf = wigner.quadrature_pdf(kitten(chi1=0.02, tail=0.01), 0.0)
    i0 = np.argmin(np.abs(pdf.x))
    assert pdf.pdf[i0] < 1e-3
    assert pdf.pdf.max() > 0.3


def test_quadrature_closed_vs_fock(cat_state):
    x = np.linspace(-7.0, 7.0, 401)
    for phase in (0.0, 0.6, np.pi / 2):
        closed = wigner.quadrature_pdf(cat_state, phase, x)
        fock = wigner.quadrature_pdf_fock(cat_state, phase, x, dim=64)
        assert np.max(np.abs(closed.pdf - fock.pdf)) < 1e-7


def test_marginal_consistency_vacuum():
    grid = wigner.wigner_of(states.CoherentLabel(0.0))
    assert wigner.wigner_marginal_consistency(grid, 0.0, states.CoherentLabel(0.0)) < 1e-6


def test_marginal_consistency_cat(cat_state):
    grid = wigner.wigner_of(cat_state)
    for phase in (0.0, np.pi / 2):
        assert wigner.wigner_marginal_consistency(grid, phase, cat_state) < 1e-4


def test_marginal_consistency_mixture_phase_free():
    mix = hhg.phase_average(1.0)
    grid = wigner.wigner_of(mix)
    assert wigner.wigner_marginal_consistency(grid, 0.4, mix) < 1e-4
    a = wigner.quadrature_pdf(mix, 0.0)
    b = wigner.quadrature_pdf(mix, 1.1)
    assert np.max(np.abs(a.pdf - b.pdf)) == 0.0
