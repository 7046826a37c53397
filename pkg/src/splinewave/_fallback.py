"""Pure-Python (numpy + math.fsum) implementations of the hot kernels.

These mirror ``_fast.pyx`` argument for argument and are used when the
compiled extension is unavailable or ``SPLINEWAVE_PURE_PYTHON`` is set.
"""
import math

import numpy as np


def local_basis(m, t):
    """Return an array ``B`` with ``B[:, s] = N_m(t + s)`` for ``t`` in [0, 1).

    Two-term recurrence N_r(y) = (y N_{r-1}(y) + (r - y) N_{r-1}(y - 1)) / (r - 1),
    carried out for all m shifts that are nonzero on one unit interval.
    """
    t = np.asarray(t, dtype=np.float64)
    vals = np.zeros(t.shape + (m,))
    vals[..., 0] = 1.0
    for r in range(2, m + 1):
        new = np.zeros_like(vals)
        for s in range(r):
            y = t + s
            acc = np.zeros_like(t)
            if s <= r - 2:
                acc = acc + y * vals[..., s]
            if s >= 1:
                acc = acc + (r - y) * vals[..., s - 1]
            new[..., s] = acc / (r - 1)
        vals = new
    return vals


def bspline_values(m, x):
    x = np.asarray(x, dtype=np.float64)
    k = np.floor(x)
    inside = (x >= 0.0) & (x < m)
    basis = local_basis(m, x - k)
    idx = np.clip(k, 0, m - 1).astype(np.int64)
    out = np.take_along_axis(basis, idx[..., None], axis=-1)[..., 0]
    return np.where(inside, out, 0.0)


def spline_series(m, coeffs, first, x, scale):
    """Evaluate sum_j coeffs[j - first] * N_m(scale * x - j)."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    y = scale * np.asarray(x, dtype=np.float64)
    k = np.floor(y).astype(np.int64)
    basis = local_basis(m, y - k)
    out = np.zeros(y.shape)
    n = coeffs.shape[0]
    for s in range(m):
        pos = k - s - first
        ok = (pos >= 0) & (pos < n)
        c = np.where(ok, coeffs[np.clip(pos, 0, n - 1)], 0.0)
        out += c * basis[..., s]
    return out


def cosine_coefficients(samples, js):
    """(1/N) sum_n f_n cos(2 pi j n / N) for each j, with exact index reduction."""
    f = np.asarray(samples, dtype=np.float64)
    n_nodes = f.shape[0]
    table = np.cos(2.0 * np.pi * np.arange(n_nodes) / n_nodes)
    nodes = np.arange(n_nodes, dtype=np.int64)
    out = np.empty(len(js))
    for i, j in enumerate(js):
        phase = (abs(int(j)) * nodes) % n_nodes
        out[i] = math.fsum(f * table[phase]) / n_nodes
    return out


def periodic_analysis(x, filt, start):
    """out[k] = sum_t filt[t] * x[(2k + start + t) mod N], k = 0..N/2-1."""
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[0]
    k = np.arange(n // 2)[:, None]
    t = np.arange(len(filt))[None, :]
    idx = (2 * k + start + t) % n
    return (x[idx] * np.asarray(filt)[None, :]).sum(axis=1)


def periodic_synthesis(coef, filt, start, n):
    """Adjoint of :func:`periodic_analysis` for a length-``n`` output."""
    coef = np.asarray(coef, dtype=np.float64)
    out = np.zeros(n)
    k = np.arange(coef.shape[0])[:, None]
    t = np.arange(len(filt))[None, :]
    idx = (2 * k + start + t) % n
    np.add.at(out, idx, coef[:, None] * np.asarray(filt)[None, :])
    return out
