# cython: language_level=3
"""Compiled versions of the hot kernels in ``_fallback.py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport floor, cos, M_PI

cnp.import_array()


cdef inline void _basis(int m, double t, double[::1] vals, double[::1] tmp) noexcept nogil:
    # vals[s] = N_m(t + s) for s = 0..m-1
    cdef int r, s
    cdef double y, acc
    vals[0] = 1.0
    for r in range(2, m + 1):
        for s in range(r):
            y = t + s
            acc = 0.0
            if s <= r - 2:
                acc = acc + y * vals[s]
            if s >= 1:
                acc = acc + (r - y) * vals[s - 1]
            tmp[s] = acc / (r - 1)
        for s in range(r):
            vals[s] = tmp[s]


def local_basis(int m, t):
    cdef const double[::1] tv = np.ascontiguousarray(t, dtype=np.float64).ravel()
    cdef Py_ssize_t n = tv.shape[0], i
    cdef int s
    out = np.empty((n, m))
    cdef double[:, ::1] ov = out
    cdef double[::1] vals = np.empty(m)
    cdef double[::1] tmp = np.empty(m)
    for i in range(n):
        _basis(m, tv[i], vals, tmp)
        for s in range(m):
            ov[i, s] = vals[s]
    return out.reshape(np.shape(t) + (m,))


def bspline_values(int m, x):
    xa = np.asarray(x, dtype=np.float64)
    cdef const double[::1] xv = np.ascontiguousarray(xa).ravel()
    cdef Py_ssize_t n = xv.shape[0], i
    out = np.zeros(n)
    cdef double[::1] ov = out
    cdef double[::1] vals = np.empty(m)
    cdef double[::1] tmp = np.empty(m)
    cdef double xi, k
    for i in range(n):
        xi = xv[i]
        if xi >= 0.0 and xi < m:
            k = floor(xi)
            _basis(m, xi - k, vals, tmp)
            ov[i] = vals[<int>k]
    return out.reshape(xa.shape)


def spline_series(int m, coeffs, Py_ssize_t first, x, double scale):
    cdef const double[::1] cv = np.ascontiguousarray(coeffs, dtype=np.float64)
    xa = np.asarray(x, dtype=np.float64)
    cdef const double[::1] xv = np.ascontiguousarray(xa).ravel()
    cdef Py_ssize_t n = xv.shape[0], nc = cv.shape[0], i, pos
    cdef int s
    cdef double y, k, acc
    out = np.empty(n)
    cdef double[::1] ov = out
    cdef double[::1] vals = np.empty(m)
    cdef double[::1] tmp = np.empty(m)
    for i in range(n):
        y = scale * xv[i]
        k = floor(y)
        _basis(m, y - k, vals, tmp)
        acc = 0.0
        for s in range(m):
            pos = <Py_ssize_t>k - s - first
            if 0 <= pos < nc:
                acc = acc + cv[pos] * vals[s]
        ov[i] = acc
    return out.reshape(xa.shape)


def cosine_coefficients(samples, js):
    cdef const double[::1] f = np.ascontiguousarray(samples, dtype=np.float64)
    cdef const long long[::1] jv = np.abs(np.asarray(js, dtype=np.int64)).astype(np.int64)
    cdef Py_ssize_t nn = f.shape[0], nj = jv.shape[0], i, q
    cdef long long j, phase
    table = np.cos(2.0 * M_PI * np.arange(nn) / nn)
    cdef double[::1] tb = table
    out = np.empty(nj)
    cdef double[::1] ov = out
    cdef double s, c, term, t
    for i in range(nj):
        j = jv[i] % nn
        s = 0.0
        c = 0.0
        phase = 0
        for q in range(nn):
            term = f[q] * tb[phase]
            # Neumaier compensated summation
            t = s + term
            if abs(s) >= abs(term):
                c = c + ((s - t) + term)
            else:
                c = c + ((term - t) + s)
            s = t
            phase = phase + j
            if phase >= nn:
                phase = phase - nn
        ov[i] = (s + c) / nn
    return out


def periodic_analysis(x, filt, Py_ssize_t start):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[::1] hv = np.ascontiguousarray(filt, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], nf = hv.shape[0], k, t, idx
    out = np.empty(n // 2)
    cdef double[::1] ov = out
    cdef double acc
    for k in range(n // 2):
        acc = 0.0
        idx = (2 * k + start) % n
        if idx < 0:
            idx = idx + n
        for t in range(nf):
            acc = acc + hv[t] * xv[idx]
            idx = idx + 1
            if idx == n:
                idx = 0
        ov[k] = acc
    return out


def periodic_synthesis(coef, filt, Py_ssize_t start, Py_ssize_t n):
    cdef const double[::1] av = np.ascontiguousarray(coef, dtype=np.float64)
    cdef const double[::1] hv = np.ascontiguousarray(filt, dtype=np.float64)
    cdef Py_ssize_t nk = av.shape[0], nf = hv.shape[0], k, t, idx
    out = np.zeros(n)
    cdef double[::1] ov = out
    cdef double a
    for k in range(nk):
        a = av[k]
        idx = (2 * k + start) % n
        if idx < 0:
            idx = idx + n
        for t in range(nf):
            ov[idx] = ov[idx] + a * hv[t]
            idx = idx + 1
            if idx == n:
                idx = 0
    return out
