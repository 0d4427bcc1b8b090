# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled float64 kernels; same contracts as ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()


cdef double[::1] _prefix(const double[::1] a, Py_ssize_t hi):
    cdef double[::1] P = np.empty(hi + 1, dtype=np.float64)
    cdef double total = 0.0
    cdef Py_ssize_t j
    for j in range(hi + 1):
        total += a[j]
        P[j] = total
    return P


def printed_profile(a, u, v, Py_ssize_t m_lo, Py_ssize_t m_hi):
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[::1] uv = np.ascontiguousarray(u, dtype=np.float64)
    cdef const double[::1] vv = np.ascontiguousarray(v, dtype=np.float64)
    cdef double[::1] P = _prefix(av, m_hi)
    cdef double[::1] au = np.empty(m_hi + 1, dtype=np.float64)
    out = np.empty(m_hi - m_lo + 1, dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t m, k
    cdef double s, pm
    for k in range(m_hi):
        au[k] = fabs(uv[k])
    for m in range(m_lo, m_hi + 1):
        pm = P[m]
        s = fabs(vv[m] * av[m])
        for k in range(m):
            s += au[k] * fabs(pm - P[k])
        ov[m - m_lo] = s
    return out


def derived_section(a, u, v, Py_ssize_t m):
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[::1] uv = np.ascontiguousarray(u, dtype=np.float64)
    cdef const double[::1] vv = np.ascontiguousarray(v, dtype=np.float64)
    cdef double[::1] P = _prefix(av, m)
    cdef double pm = P[m]
    cdef double s = fabs(vv[m] * av[m])
    cdef Py_ssize_t k
    for k in range(m):
        s += fabs(uv[k] * (pm - P[k]) - vv[k] * av[k])
    return s


def derived_profile(a, u, v, Py_ssize_t m_lo, Py_ssize_t m_hi):
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[::1] uv = np.ascontiguousarray(u, dtype=np.float64)
    cdef const double[::1] vv = np.ascontiguousarray(v, dtype=np.float64)
    cdef double[::1] P = _prefix(av, m_hi)
    cdef double[::1] w = np.empty(m_hi + 1, dtype=np.float64)
    out = np.empty(m_hi - m_lo + 1, dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t m, k
    cdef double s, pm
    for k in range(m_hi):
        w[k] = uv[k] * P[k] + vv[k] * av[k]
    for m in range(m_lo, m_hi + 1):
        pm = P[m]
        s = fabs(vv[m] * av[m])
        for k in range(m):
            s += fabs(uv[k] * pm - w[k])
        ov[m - m_lo] = s
    return out


def forward_substitution(rows):
    cdef Py_ssize_t n_rows = len(rows)
    T_arr = np.zeros((n_rows, n_rows), dtype=np.float64)
    for i, r in enumerate(rows):
        T_arr[i, : len(r)] = r
    cdef double[:, ::1] T = T_arr
    X_arr = np.zeros((n_rows, n_rows), dtype=np.float64)
    cdef double[:, ::1] X = X_arr
    cdef Py_ssize_t n, k, j
    cdef double d, s
    for n in range(n_rows):
        d = T[n, n]
        if d == 0.0:
            raise ZeroDivisionError(n)
        X[n, n] = 1.0 / d
        for k in range(n):
            s = 0.0
            for j in range(k, n):
                s += T[n, j] * X[j, k]
            X[n, k] = -s / d
    return [list(X_arr[n, : n + 1]) for n in range(n_rows)]
