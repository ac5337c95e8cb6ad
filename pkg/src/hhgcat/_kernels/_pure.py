"""Pure-NumPy implementations of the hot kernels.

Selected automatically when the compiled extension is unavailable (or when
``HHGCAT_PURE_PYTHON`` is set).  Signatures and numerics match
``hhgcat._kernels._core`` exactly; the benchmark in ``benchmarks/`` compares
the two.
"""

from __future__ import annotations

import numpy as np

BACKEND = "pure"

_CHUNK = 8192  # phase-space points processed per batch (bounds memory)


def displaced_parity_grid(psi, gammas, weights=None):
    """Parity expectation of the displaced state, point by point.

    For each phase-space point ``gamma`` the state is displaced by
    ``-gamma`` using the analytic Fock matrix elements of the displacement
    operator (row recurrence), and the photon-number parity of the result is
    accumulated.  Dividing by pi yields the Wigner function in the
    vacuum-variance-1/2 convention.

    Parameters
    ----------
    psi : complex array, shape (dim,) or None
        Pure-state amplitudes.  ``None`` selects the diagonal-mixture mode.
    gammas : complex array
        Phase-space points (x + i p) / sqrt(2).
    weights : real array, shape (dim,), optional
        Photon-number weights of a diagonal mixture; used when ``psi`` is
        None.

    Returns
    -------
    real array, same shape as ``gammas``
        sum_m (-1)^m |<m|D(-gamma)|state>|^2 (weighted over n for mixtures).
    """
    if psi is None:
        if weights is None:
            raise ValueError("either psi or weights must be given")
        weights = np.asarray(weights, dtype=np.float64)
        dim = weights.shape[0]
    else:
        psi = np.asarray(psi, dtype=np.complex128)
        dim = psi.shape[0]
    g = np.asarray(gammas, dtype=np.complex128)
    shape = g.shape
    g = g.ravel()
    out = np.empty(g.size, dtype=np.float64)
    for lo in range(0, g.size, _CHUNK):
        sl = slice(lo, min(lo + _CHUNK, g.size))
        out[sl] = _parity_chunk(psi, weights, g[sl], dim)
    return out.reshape(shape)


def _parity_chunk(psi, weights, gam, dim):
    beta = -gam  # D(-gamma) applied to the state
    npts = beta.size
    sqrt_n = np.sqrt(np.arange(dim))
    # row m = 0 of D(beta): <0|D(beta)|n> = (-conj(beta))^n / sqrt(n!) e^{-|beta|^2/2}
    row = np.empty((npts, dim), dtype=np.complex128)
    row[:, 0] = np.exp(-0.5 * (beta.real**2 + beta.imag**2))
    neg_conj = -np.conj(beta)
    for n in range(1, dim):
        row[:, n] = row[:, n - 1] * neg_conj / sqrt_n[n]
    acc = np.zeros(npts)
    sign = 1.0
    shifted = np.empty_like(row)
    for m in range(dim):
        if psi is not None:
            y = row @ psi
            acc += sign * (y.real**2 + y.imag**2)
        else:
            acc += sign * ((row.real**2 + row.imag**2) @ weights)
        sign = -sign
        if m == dim - 1:
            break
        # <m+1|D|n> = (sqrt(n) <m|D|n-1> + beta <m|D|n>) / sqrt(m+1)
        shifted[:, 0] = 0.0
        shifted[:, 1:] = row[:, :-1]
        row = (shifted * sqrt_n + beta[:, None] * row) / np.sqrt(m + 1.0)
    return acc


def sfa_dipole(e_field, a_field, a_int, a2_int, dt, ip, eps, lookback):
    """Direct double-time integral for the strong-field dipole expectation.

    All input arrays are sampled on the same uniform grid with spacing
    ``dt``: the electric field, the vector potential, its running integral
    and the running integral of its square.  ``lookback`` limits how far
    back (in samples) the ionization-time integral reaches; pass a value
    >= len(grid) for the full range.

    Returns the real dipole expectation on the same grid.
    """
    e_field = np.asarray(e_field, dtype=np.float64)
    a_field = np.asarray(a_field, dtype=np.float64)
    a_int = np.asarray(a_int, dtype=np.float64)
    a2_int = np.asarray(a2_int, dtype=np.float64)
    n = e_field.size
    two_ip = 2.0 * ip
    # hydrogenic 1s bound-continuum dipole: d(k) = i c k / (k^2 + 2 Ip)^3
    dme_c = 2.0 ** 3.5 * two_ip ** 1.25 / np.pi

    out = np.zeros(n)
    j_all = np.arange(n)
    for i in range(1, n):
        j0 = max(0, i - lookback)
        j = j_all[j0:i + 1]
        tau = (i - j) * dt
        # stationary momentum; tau -> 0 limit is -A(t_i)
        p_st = np.empty(j.size)
        nz = tau > 0
        p_st[nz] = -(a_int[i] - a_int[j[nz]]) / tau[nz]
        if not nz.all():
            p_st[~nz] = -a_field[i]
        k_re = p_st + a_field[i]
        k_io = p_st + a_field[j]
        d_re = dme_c * k_re / (k_re**2 + two_ip) ** 3
        d_io = dme_c * k_io / (k_io**2 + two_ip) ** 3
        d_alpha = a_int[i] - a_int[j]
        tau_safe = np.where(nz, tau, 1.0)
        action = ip * tau - 0.5 * d_alpha**2 / tau_safe * nz + 0.5 * (a2_int[i] - a2_int[j])
        spread = (np.pi / (eps + 0.5j * tau)) ** 1.5
        integrand = d_re * d_io * e_field[j] * spread * np.exp(-1j * action)
        w = np.ones(j.size)
        w[0] = 0.5
        w[-1] = 0.5
        # d(k)* d(k') = |c|^2 k k'/(...) since d is i * (real, odd); x(t) = -2 Im I
        out[i] = -2.0 * np.imag(np.sum(w * integrand)) * dt
    return out
