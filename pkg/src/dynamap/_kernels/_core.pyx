# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled stepping kernels: RK4 map propagation and the Volterra recurrence.

Same algorithms as ``_fallback.py``; see that module for the contracts.
"""

import numpy as np

from libc.math cimport sqrt


cdef void _matmul(double complex[:, :] a, double complex[:, :] b,
                  double complex[:, :] out, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j, k
    cdef double complex acc
    for i in range(n):
        for j in range(n):
            acc = 0
            for k in range(n):
                acc = acc + a[i, k] * b[k, j]
            out[i, j] = acc


cdef void _rk4_step(double complex[:, :] g0, double complex[:, :] gm,
                    double complex[:, :] g1, double complex[:, :] y,
                    double h, double complex[:, :] out,
                    double complex[:, :] k1, double complex[:, :] k2,
                    double complex[:, :] k3, double complex[:, :] k4,
                    double complex[:, :] tmp, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j
    _matmul(g0, y, k1, n)
    for i in range(n):
        for j in range(n):
            tmp[i, j] = y[i, j] + (0.5 * h) * k1[i, j]
    _matmul(gm, tmp, k2, n)
    for i in range(n):
        for j in range(n):
            tmp[i, j] = y[i, j] + (0.5 * h) * k2[i, j]
    _matmul(gm, tmp, k3, n)
    for i in range(n):
        for j in range(n):
            tmp[i, j] = y[i, j] + h * k3[i, j]
    _matmul(g1, tmp, k4, n)
    for i in range(n):
        for j in range(n):
            out[i, j] = y[i, j] + (h / 6.0) * (
                k1[i, j] + 2.0 * k2[i, j] + 2.0 * k3[i, j] + k4[i, j])


def rk4_steps(gs, hs, y0):
    """Advance Y' = G(t) Y through substeps; see the fallback docstring."""
    gs = np.ascontiguousarray(gs, dtype=complex)
    hs_arr = np.ascontiguousarray(hs, dtype=float)
    cdef double complex[:, :, :, :] gv = gs
    cdef double[:] hv = hs_arr
    cdef Py_ssize_t m = gv.shape[0]
    cdef Py_ssize_t n = gv.shape[2]

    y_arr = np.array(y0, dtype=complex, order="C")
    work = np.empty((8, n, n), dtype=complex)
    cdef double complex[:, :] y = y_arr
    cdef double complex[:, :] k1 = work[0]
    cdef double complex[:, :] k2 = work[1]
    cdef double complex[:, :] k3 = work[2]
    cdef double complex[:, :] k4 = work[3]
    cdef double complex[:, :] tmp = work[4]
    cdef double complex[:, :] y_full = work[5]
    cdef double complex[:, :] y_half = work[6]
    cdef double complex[:, :] y_next = work[7]

    cdef double err_max = 0.0
    cdef double err, h
    cdef double complex diff
    cdef Py_ssize_t i, r, c

    with nogil:
        for i in range(m):
            h = hv[i]
            _rk4_step(gv[i, 0], gv[i, 2], gv[i, 4], y, h,
                      y_full, k1, k2, k3, k4, tmp, n)
            _rk4_step(gv[i, 0], gv[i, 1], gv[i, 2], y, 0.5 * h,
                      y_half, k1, k2, k3, k4, tmp, n)
            _rk4_step(gv[i, 2], gv[i, 3], gv[i, 4], y_half, 0.5 * h,
                      y_next, k1, k2, k3, k4, tmp, n)
            err = 0.0
            for r in range(n):
                for c in range(n):
                    diff = y_full[r, c] - y_next[r, c]
                    err = err + diff.real * diff.real + diff.imag * diff.imag
                    y[r, c] = y_next[r, c]
            err = sqrt(err) / 15.0
            if err > err_max:
                err_max = err
    return y_arr, err_max


def volterra_profile(kvals, double h):
    """Second-order Volterra recurrence; see the fallback docstring."""
    k_arr = np.ascontiguousarray(kvals, dtype=float)
    cdef double[:] kv = k_arr
    cdef Py_ssize_t n = kv.shape[0] - 1
    a_arr = np.empty(n + 1)
    d_arr = np.empty(n + 1)
    cdef double[:] a = a_arr
    cdef double[:] d = d_arr
    cdef double k0 = kv[0]
    cdef double s, a_pred, d_pred
    cdef Py_ssize_t m, j
    a[0] = 1.0
    d[0] = 0.0
    with nogil:
        for m in range(n):
            s = 0.5 * kv[m + 1] * a[0]
            for j in range(1, m + 1):
                s = s + kv[m + 1 - j] * a[j]
            a_pred = a[m] + h * d[m]
            d_pred = -h * (s + 0.5 * k0 * a_pred)
            a[m + 1] = a[m] + 0.5 * h * (d[m] + d_pred)
            d[m + 1] = -h * (s + 0.5 * k0 * a[m + 1])
    return a_arr, d_arr
