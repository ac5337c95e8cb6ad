import numpy as np
import pytest

from hhgcat import dipole as dp

OMEGA = 0.057
PERIOD = 2 * np.pi / OMEGA


@pytest.fixture(scope="session")
def two_level_64():
    """Flat 64-cycle symmetric drive, detuned two-level atom."""
    cfg = dp.PulseConfig(omega=OMEGA, e0=0.05, envelope="flat", cycles=64)
    return dp.solve_two_level(cfg, 1.0, 0.9, dp.TimeGrid.for_pulse(cfg, 1024))


@pytest.fixture(scope="session")
def two_level_resonant():
    """Strong resonant drive: incoherent-dominated fundamental band."""
    cfg = dp.PulseConfig(omega=OMEGA, e0=0.1, envelope="flat", cycles=32)
    return dp.solve_two_level(cfg, 1.0, OMEGA, dp.TimeGrid.for_pulse(cfg, 512))


@pytest.fixture(scope="session")
def two_level_short():
    """Short window for squeezing-propagator studies (omega = 1)."""
    cfg = dp.PulseConfig(omega=1.0, e0=0.15, envelope="flat", cycles=4)
    return dp.solve_two_level(cfg, 1.0, 2.3, dp.TimeGrid.for_pulse(cfg, 512))


def tone_signal(omega=0.4, harmonic=3, cycles=128, samples_per_cycle=256):
    period = 2 * np.pi / omega
    dt = period / samples_per_cycle
    n = int(cycles * samples_per_cycle) + 1
    t = dt * np.arange(n)
    return dp.DipoleSignal(0.0, dt, np.cos(harmonic * omega * t))


@pytest.fixture(scope="session")
def tone3():
    return tone_signal()
