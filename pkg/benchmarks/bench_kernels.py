"""Compare the compiled and pure-NumPy kernels on the two hot paths.

Run with ``python benchmarks/bench_kernels.py``.  The displaced-parity grid
dominates phase-space oracle checks; the double-time integral dominates the
strong-field dipole solver.
"""

import time

import numpy as np
from scipy.integrate import cumulative_trapezoid

from hhgcat import states
from hhgcat._kernels import available_backends
from hhgcat.dipole import PulseConfig, TimeGrid


def time_call(fn, *args, repeats=3):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def bench_displaced_parity(backends):
    dim = 128
    psi = states.coherent_amplitudes(0.7 + 0.4j, dim)
    axis = np.linspace(-6.0, 6.0, 201)
    x, p = np.meshgrid(axis, axis, indexing="ij")
    gammas = (x + 1j * p) / np.sqrt(2)
    rows = []
    baseline = None
    for name, mod in backends.items():
        elapsed, values = time_call(mod.displaced_parity_grid, psi, gammas, None, repeats=1)
        if baseline is None:
            baseline = values
        else:
            assert np.max(np.abs(values - baseline)) < 1e-12
        rows.append((f"displaced parity 201x201, dim {dim}", name, elapsed))
    return rows


def bench_sfa(backends):
    cfg = PulseConfig(omega=0.057, e0=0.053, envelope="sin2", cycles=16)
    grid = TimeGrid.for_pulse(cfg, 256)
    times = grid.times()
    e_field = cfg.field_at(times)
    a_field = -cumulative_trapezoid(e_field, dx=grid.dt, initial=0.0)
    a_int = cumulative_trapezoid(a_field, dx=grid.dt, initial=0.0)
    a2_int = cumulative_trapezoid(a_field**2, dx=grid.dt, initial=0.0)
    rows = []
    baseline = None
    for name, mod in backends.items():
        elapsed, values = time_call(
            mod.sfa_dipole, e_field, a_field, a_int, a2_int, grid.dt, 0.5, 1e-4, grid.n,
            repeats=1,
        )
        if baseline is None:
            baseline = values
        else:
            scale = np.max(np.abs(baseline))
            assert np.max(np.abs(values - baseline)) < 1e-12 * scale
        rows.append((f"strong-field dipole, n = {grid.n}", name, elapsed))
    return rows


def main():
    backends = available_backends()
    print(f"backends available: {', '.join(backends)}")
    rows = bench_displaced_parity(backends) + bench_sfa(backends)
    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'backend':<9} {'seconds':>9}")
    reference = {}
    for kernel, name, elapsed in rows:
        reference.setdefault(kernel, elapsed)
        speedup = reference[kernel] / elapsed
        print(f"{kernel:<{width}}  {name:<9} {elapsed:>9.3f}  ({speedup:.1f}x vs first)")


if __name__ == "__main__":
    main()
