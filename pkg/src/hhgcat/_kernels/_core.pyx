# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: displaced-parity phase-space evaluation and the
strong-field double-time dipole integral.  Mirrors ``_pure`` exactly."""

import numpy as np

cimport numpy as cnp
from libc.math cimport atan2, cos, exp, pow, sin, sqrt

cnp.import_array()

BACKEND = "compiled"


def displaced_parity_grid(psi, gammas, weights=None):
    """See ``hhgcat._kernels._pure.displaced_parity_grid``."""
    g = np.asarray(gammas, dtype=np.complex128)
    shape = g.shape
    cdef cnp.ndarray[cnp.float64_t, ndim=1] gr = np.ascontiguousarray(g.ravel().real)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] gi = np.ascontiguousarray(g.ravel().imag)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(gr.size, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] pr, pi, wc, row_re, row_im, nxt_re, nxt_im
    cdef Py_ssize_t dim
    if psi is not None:
        p = np.asarray(psi, dtype=np.complex128)
        dim = p.shape[0]
        pr = np.ascontiguousarray(p.real)
        pi = np.ascontiguousarray(p.imag)
        row_re = np.empty(dim)
        row_im = np.empty(dim)
        nxt_re = np.empty(dim)
        nxt_im = np.empty(dim)
        _parity_loop(pr, pi, gr, gi, row_re, row_im, nxt_re, nxt_im, out, 0)
    else:
        if weights is None:
            raise ValueError("either psi or weights must be given")
        wc = np.ascontiguousarray(np.asarray(weights, dtype=np.float64))
        dim = wc.shape[0]
        row_re = np.empty(dim)
        row_im = np.empty(dim)
        nxt_re = np.empty(dim)
        nxt_im = np.empty(dim)
        _parity_loop(wc, wc, gr, gi, row_re, row_im, nxt_re, nxt_im, out, 1)
    return out.reshape(shape)


cdef void _parity_loop(cnp.float64_t[::1] p_re, cnp.float64_t[::1] p_im,
                       cnp.float64_t[::1] g_re, cnp.float64_t[::1] g_im,
                       cnp.float64_t[::1] row_re, cnp.float64_t[::1] row_im,
                       cnp.float64_t[::1] nxt_re, cnp.float64_t[::1] nxt_im,
                       cnp.float64_t[::1] out, int mixture) nogil:
    # p_re/p_im: pure-state amplitudes (mixture=0); p_re: weights (mixture=1).
    cdef Py_ssize_t dim = row_re.shape[0]
    cdef Py_ssize_t npts = g_re.shape[0]
    cdef Py_ssize_t k, m, n
    cdef double br, bi, acc, sign, inv_sq, yr, yi, rr, ri, sq_n
    for k in range(npts):
        br = -g_re[k]
        bi = -g_im[k]
        row_re[0] = exp(-0.5 * (br * br + bi * bi))
        row_im[0] = 0.0
        for n in range(1, dim):
            # row0[n] = row0[n-1] * (-(br - i bi)) / sqrt(n)
            rr = row_re[n - 1]
            ri = row_im[n - 1]
            inv_sq = 1.0 / sqrt(<double> n)
            row_re[n] = (-br * rr - bi * ri) * inv_sq
            row_im[n] = (bi * rr - br * ri) * inv_sq
        acc = 0.0
        sign = 1.0
        for m in range(dim):
            if mixture == 0:
                yr = 0.0
                yi = 0.0
                for n in range(dim):
                    yr += row_re[n] * p_re[n] - row_im[n] * p_im[n]
                    yi += row_re[n] * p_im[n] + row_im[n] * p_re[n]
                acc += sign * (yr * yr + yi * yi)
            else:
                yr = 0.0
                for n in range(dim):
                    yr += (row_re[n] * row_re[n] + row_im[n] * row_im[n]) * p_re[n]
                acc += sign * yr
            sign = -sign
            if m == dim - 1:
                break
            # row_{m+1}[n] = (sqrt(n) row_m[n-1] + beta row_m[n]) / sqrt(m+1)
            inv_sq = 1.0 / sqrt(<double> (m + 1))
            for n in range(dim - 1, 0, -1):
                sq_n = sqrt(<double> n)
                rr = row_re[n]
                ri = row_im[n]
                nxt_re[n] = (sq_n * row_re[n - 1] + br * rr - bi * ri) * inv_sq
                nxt_im[n] = (sq_n * row_im[n - 1] + br * ri + bi * rr) * inv_sq
            nxt_re[0] = (br * row_re[0] - bi * row_im[0]) * inv_sq
            nxt_im[0] = (br * row_im[0] + bi * row_re[0]) * inv_sq
            row_re[:] = nxt_re
            row_im[:] = nxt_im
        out[k] = acc


def sfa_dipole(e_field, a_field, a_int, a2_int, double dt, double ip,
               double eps, Py_ssize_t lookback):
    """See ``hhgcat._kernels._pure.sfa_dipole``."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] e = np.ascontiguousarray(e_field, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] a = np.ascontiguousarray(a_field, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ai = np.ascontiguousarray(a_int, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] a2 = np.ascontiguousarray(a2_int, dtype=np.float64)
    cdef Py_ssize_t n = e.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(n, dtype=np.float64)
    _sfa_loop(e, a, ai, a2, dt, ip, eps, lookback, out)
    return out


cdef void _sfa_loop(cnp.float64_t[::1] e, cnp.float64_t[::1] a,
                    cnp.float64_t[::1] ai, cnp.float64_t[::1] a2,
                    double dt, double ip, double eps, Py_ssize_t lookback,
                    cnp.float64_t[::1] out) nogil:
    cdef Py_ssize_t n = e.shape[0]
    cdef Py_ssize_t i, j, j0
    cdef double pi_c = 3.141592653589793
    cdef double two_ip = 2.0 * ip
    cdef double dme_c = pow(2.0, 3.5) * pow(two_ip, 1.25) / pi_c
    cdef double tau, p_st, k_re, k_io, d_re, d_io, d_alpha, action, w
    cdef double sr, si, mod2, r15, th, spr, spi, ca, sa, fi, acc_im, amp, den
    for i in range(1, n):
        j0 = i - lookback
        if j0 < 0:
            j0 = 0
        acc_im = 0.0
        for j in range(j0, i + 1):
            tau = (i - j) * dt
            if j == i:
                p_st = -a[i]
                action = 0.0
            else:
                p_st = -(ai[i] - ai[j]) / tau
                d_alpha = ai[i] - ai[j]
                action = ip * tau - 0.5 * d_alpha * d_alpha / tau + 0.5 * (a2[i] - a2[j])
            k_re = p_st + a[i]
            k_io = p_st + a[j]
            d_re = dme_c * k_re / pow(k_re * k_re + two_ip, 3.0)
            d_io = dme_c * k_io / pow(k_io * k_io + two_ip, 3.0)
            # (pi / (eps + i tau/2))^{3/2}
            den = eps * eps + 0.25 * tau * tau
            sr = pi_c * eps / den
            si = -pi_c * 0.5 * tau / den
            mod2 = sr * sr + si * si
            r15 = pow(mod2, 0.75)
            th = 1.5 * atan2(si, sr)
            spr = r15 * cos(th)
            spi = r15 * sin(th)
            ca = cos(action)
            sa = sin(action)
            # Im[spread * exp(-i action)] scaled by the real amplitude
            amp = d_re * d_io * e[j]
            fi = amp * (spi * ca - spr * sa)
            w = 1.0
            if j == j0 or j == i:
                w = 0.5
            acc_im += w * fi
        out[i] = -2.0 * acc_im * dt
