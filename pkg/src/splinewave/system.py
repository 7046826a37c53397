"""Scaling function, wavelet and the asymptotic profile of their coefficients.

    phi(x) = sum_j c_j N_m(x - j)
    psi(x) = sum_l (-1)^l a_{1-l} phi(2x - l) = sum_j gamma_j N_m(2x - j)

A :class:`WaveletSystem` bundles certified c, b, a and gamma tables.  The
profile constants D (for a_j) and E (for gamma_j) depend only on the sign
and parity of j; they are assembled from deep series values of b and c.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np

from . import kernels
from .bspline import autocorrelation_sequence, check_order, moment
from .coefficients import (
    CoefficientTable,
    RecurrenceLimits,
    amplitude_constants,
    compose_a,
    compose_gamma,
    direct_table,
    window_for,
)
from .errors import CertifiedRangeError, ConvergenceError
from .euler_frobenius import EFSpectrum, spectrum

QUADRATURE_EPS_FLOOR = 1e-12
SERIES_EPS_FLOOR = 1e-250
METHODS = ("quadrature", "series")


@dataclass(frozen=True)
class WaveletSystem:
    m: int
    eps: float
    method: str
    nodes: int | None
    spectrum: EFSpectrum
    limits: RecurrenceLimits
    c_table: CoefficientTable
    b_table: CoefficientTable
    a_table: CoefficientTable
    gamma_table: CoefficientTable

    @property
    def alpha0(self) -> float:
        return self.spectrum.alpha0

    @property
    def phi_limit(self) -> float:
        """Certified range |x| <= J - m for phi."""
        return float(min(-self.c_table.lo, self.c_table.hi) - self.m)

    @property
    def psi_limit(self) -> float:
        """Certified range for psi: the gamma window seen at scale 2."""
        g = self.gamma_table
        return float(min(-g.lo, g.hi) - self.m) / 2.0

    def tables(self) -> dict:
        return {
            "c": self.c_table,
            "b": self.b_table,
            "a": self.a_table,
            "gamma": self.gamma_table,
        }


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ConvergenceError:
        raise
    except (ArithmeticError, FloatingPointError) as exc:  # pragma: no cover - defensive
        raise ConvergenceError(name, str(exc)) from exc


@lru_cache(maxsize=32)
def build_system(m, eps: float = 1e-12, method: str = "quadrature", nodes=None) -> WaveletSystem:
    """Build all four tables with certified tails <= eps.

    ``method='quadrature'`` computes c and b by the trapezoid rule and needs
    eps >= 1e-12; ``method='series'`` uses the binomial series and reaches
    far below double-precision roundoff.
    """
    m = check_order(m, 2)
    eps = float(eps)
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    if not eps > 0:
        raise ValueError("eps must be positive")
    if method == "quadrature" and eps < QUADRATURE_EPS_FLOOR:
        raise ValueError(
            f"eps = {eps:g} is below the quadrature roundoff floor {QUADRATURE_EPS_FLOOR:g}; "
            "use method='series'"
        )
    if eps < SERIES_EPS_FLOOR:
        raise ValueError(f"eps must be >= {SERIES_EPS_FLOOR:g}")
    spec = _stage("spectrum", spectrum, m)
    limits = _stage("amplitude_constants", amplitude_constants, m)
    # c and b are taken a few decades deeper than eps so that the composed
    # tables inherit truncation errors well below eps
    inner = eps * 1e-3
    Jc = window_for("c", m, inner)
    Jb = window_for("b", m, inner)
    c = _stage("c_table", direct_table, "c", m, Jc, method, nodes)
    b = _stage("b_table", direct_table, "b", m, Jb, method, nodes)
    a = _stage("a_table", compose_a, c, b, eps)
    g = _stage("gamma_table", compose_gamma, a, c, eps)
    return WaveletSystem(m, eps, method, nodes, spec, limits, c, b, a, g)


# --------------------------------------------------------------------------
# evaluation


def _check_range(what, x, limit):
    worst = float(np.max(np.abs(x))) if np.size(x) else 0.0
    if worst > limit:
        raise CertifiedRangeError(what, limit, worst)


def _series_eval(table: CoefficientTable, m, x, scale):
    return kernels.spline_series(m, table.values, table.lo, np.asarray(x, dtype=np.float64), scale)


def _scalar(x, out):
    return float(out) if np.ndim(x) == 0 else out


def phi_eval(sys: WaveletSystem, x):
    """phi_m(x) = sum_j c_j N_m(x - j); only the m shifts with x - m < j <= x contribute."""
    _check_range("phi", x, sys.phi_limit)
    return _scalar(x, _series_eval(sys.c_table, sys.m, x, 1.0))


def psi_eval(sys: WaveletSystem, x):
    """psi_m(x) = sum_j gamma_j N_m(2x - j)."""
    _check_range("psi", x, sys.psi_limit)
    return _scalar(x, _series_eval(sys.gamma_table, sys.m, x, 2.0))


def psi_direct(sys: WaveletSystem, x):
    """psi_m from the alternating flip sum_l (-1)^l a_{1-l} phi(2x - l)."""
    _check_range("psi", x, sys.psi_limit)
    x = np.asarray(x, dtype=np.float64)
    a = sys.a_table
    out = np.zeros_like(x)
    for j in a.indices:
        l = 1 - j
        coef = (-1.0 if l % 2 else 1.0) * a[j]
        out = out + coef * _series_eval(sys.c_table, sys.m, 2.0 * x - l, 1.0)
    return _scalar(x, out)


def two_scale_residual(sys: WaveletSystem, x):
    """phi(x) - sum_j a_j phi(2x - j) on the given points."""
    _check_range("phi", x, sys.phi_limit)
    x = np.asarray(x, dtype=np.float64)
    rhs = np.zeros_like(x)
    for j in sys.a_table.indices:
        rhs = rhs + sys.a_table[j] * _series_eval(sys.c_table, sys.m, 2.0 * x - j, 1.0)
    return _scalar(x, _series_eval(sys.c_table, sys.m, x, 1.0) - rhs)


# --------------------------------------------------------------------------
# exact inner products


def gram_phi(sys: WaveletSystem, k: int) -> float:
    """<phi, phi(. - k)> = sum_{p,q} c_p c_q N_{2m}(m + p - q - k)."""
    c = np.asarray(sys.c_table.values)
    cc = np.correlate(c, c, mode="full")  # index d = p - q, from -(L-1)
    shift = len(c) - 1
    ac = autocorrelation_sequence(sys.m)
    terms = []
    for idx, n in enumerate(range(-sys.m + 1, sys.m)):
        d = n + int(k)
        if -shift <= d <= shift:
            terms.append(ac[idx] * cc[d + shift])
    return math.fsum(terms)


def fine_scale_phi(sys: WaveletSystem, k: int = 0):
    """Coefficients e with phi(x - k) = sum_s e_s N_m(2x - s); returns (e, first index)."""
    m = sys.m
    w = np.array([comb(m, i) for i in range(m + 1)], dtype=np.float64) * 2.0 ** (1 - m)
    c = sys.c_table
    up = np.zeros(2 * len(c.values) - 1)
    up[::2] = c.values
    return np.convolve(up, w), 2 * c.lo + 2 * int(k)


def psi_phi_inner(sys: WaveletSystem, k: int) -> float:
    """<psi, phi(. - k)> from the fine-scale Gram matrix 1/2 N_{2m}(m + s - j)."""
    e, e_lo = fine_scale_phi(sys, k)
    g = sys.gamma_table
    return 0.5 * _cross(g.values, g.lo, e, e_lo, sys.m)


def psi_gram(sys: WaveletSystem, k: int) -> float:
    """<psi, psi(. - k)>."""
    g = sys.gamma_table
    return 0.5 * _cross(g.values, g.lo, g.values, g.lo + 2 * int(k), sys.m)


def _cross(u, u_lo, v, v_lo, m):
    # sum_{j,s} u_j v_s ac(s - j)
    ac = autocorrelation_sequence(m)
    corr = np.correlate(v, u, mode="full")  # index t = (s - v_lo) - (j - u_lo) + len(u) - 1
    terms = []
    for idx, n in enumerate(range(-m + 1, m)):
        t = n - (v_lo - u_lo) + len(u) - 1
        if 0 <= t < len(corr):
            terms.append(ac[idx] * corr[t])
    return math.fsum(terms)


def psi_moments(sys: WaveletSystem) -> list:
    """Moments int x^p psi(x) dx for p = 0..m-1 from the exact B-spline moments."""
    m = sys.m
    g = sys.gamma_table
    js = g.indices.astype(np.float64)
    mom = [float(moment(m, q)) for q in range(m)]
    out = []
    for p in range(m):
        terms = []
        for q in range(p + 1):
            terms.extend((g.values * comb(p, q) * js ** (p - q) * mom[q] * 2.0 ** (-p - 1)).tolist())
        out.append(math.fsum(terms))
    return out


def quadrature_inner(f, g, lo: float, hi: float, cell: float = 0.5, nodes: int = 8) -> float:
    """Composite Gauss-Legendre quadrature of f*g over [lo, hi].

    Exact for piecewise polynomials of degree < 2*nodes whose knots lie on
    the ``cell`` grid, which covers phi and psi.
    """
    x, w = np.polynomial.legendre.leggauss(nodes)
    edges = np.arange(lo, hi + 0.5 * cell, cell)
    left = edges[:-1, None]
    pts = left + 0.5 * cell * (x[None, :] + 1.0)
    vals = f(pts.ravel()) * g(pts.ravel())
    return math.fsum((vals.reshape(pts.shape) * w[None, :] * 0.5 * cell).ravel().tolist())


def phi_unchecked(sys: WaveletSystem, x):
    """phi from the truncated table without the range check (truncation error <= m * tail)."""
    return _series_eval(sys.c_table, sys.m, x, 1.0)


def psi_unchecked(sys: WaveletSystem, x):
    return _series_eval(sys.gamma_table, sys.m, x, 2.0)


# --------------------------------------------------------------------------
# asymptotic profile


def r_a(j, m):
    """Index map for the a_j law: r = floor(|j - m| / 2)."""
    return abs(int(j) - int(m)) // 2


def r_gamma(j):
    """Index map for the gamma_j law: r = floor((|j| + 1) / 2)."""
    return (abs(int(j)) + 1) // 2


def r_bracket(j):
    """Index map of the combined statement for psi: r_j = floor(|j| / 2)."""
    return abs(int(j)) // 2


def class_of(j) -> tuple:
    """(sign, parity) class of an index."""
    j = int(j)
    return (1 if j > 0 else -1, j % 2)


@lru_cache(maxsize=64)
def series_table(kind: str, m: int, J: int) -> CoefficientTable:
    """Series-route c or b table over [-J, J], cached."""
    return direct_table(kind, m, J, "series")


@dataclass(frozen=True)
class DClass:
    """Decomposition of one D entry: D = D_m + D_{m+1} with partial sums K_i."""

    value: float
    D_m: float
    D_m1: float
    K: dict
    n: dict


@dataclass(frozen=True)
class AsymptoticProfile:
    m: int
    alpha0: float
    K_c: float
    K_b: float
    D: dict
    D_parts: dict = field(repr=False)
    E: dict = field(default_factory=dict)
    E_bracket: dict = field(default_factory=dict)

    r_conventions = {
        "a": "floor(|j - m| / 2)",
        "gamma": "floor((|j| + 1) / 2)",
        "bracket": "floor(|j| / 2)",
    }

    def D_for(self, j) -> float:
        return self.D[class_of(j)]

    def E_for(self, j) -> float:
        return self.E[class_of(j)]

    def E_bracket_for(self, j) -> float:
        return self.E_bracket[class_of(j)]

    def predicted_a(self, j) -> float:
        r = r_a(j, self.m)
        return self.D_for(j) * (-1) ** r * math.exp(-self.alpha0 * r) / math.sqrt(r)

    def predicted_gamma(self, j) -> float:
        r = r_gamma(j)
        return self.E_for(j) * (-1) ** r * math.exp(-self.alpha0 * r) / math.sqrt(r)

    def predicted_gamma_bracket(self, j) -> float:
        r = r_bracket(j)
        return self.E_bracket_for(j) * (-1) ** r * math.exp(-self.alpha0 * r) / math.sqrt(r)

    def psi_bracket(self, x):
        """sum over 2x - m < j <= 2x of the predicted gamma_j (combined form) times N_m(2x - j)."""
        from .bspline import eval_bspline

        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        out = np.zeros_like(x)
        for i, xv in enumerate(x):
            y = 2.0 * xv
            top = int(math.floor(y))
            total = 0.0
            for j in range(top - self.m + 1, top + 1):
                if r_bracket(j) == 0:
                    raise ValueError("bracket needs |j| >= 2")
                total += self.predicted_gamma_bracket(j) * eval_bspline(self.m, y - j)
            out[i] = total
        return out

    def to_dict(self) -> dict:
        def key(k):
            sign, parity = k
            return f"{'positive' if sign > 0 else 'negative'}_{'even' if parity == 0 else 'odd'}"

        return {
            "alpha0": self.alpha0,
            "K_c": self.K_c,
            "K_b": self.K_b,
            "D": {key(k): v for k, v in sorted(self.D.items())},
            "D_parts": {
                key(k): {
                    "D_m": p.D_m,
                    "D_m_plus_1": p.D_m1,
                    "K_i": {str(i): v for i, v in p.K.items()},
                    "n_i": {str(i): v for i, v in p.n.items()},
                }
                for k, p in sorted(self.D_parts.items())
            },
            "E": {key(k): v for k, v in sorted(self.E.items())},
            "E_bracket": {key(k): v for k, v in sorted(self.E_bracket.items())},
            "r_conventions": dict(self.r_conventions),
        }


def _sum_reach(alpha0: float, rate: float, level: float = 1e-17) -> int:
    # number of terms until weights of size e^{-rate * alpha0 * k} drop below level
    return int(math.ceil(-math.log(level) / (rate * alpha0))) + 4


def D_at(m: int, j: int, b_values, alpha0: float, K_c: float, reach: int) -> DClass:
    """Assemble the D constant for index j from b values (callable index -> b)."""
    r = r_a(j, m)
    w = [comb(m, i) for i in range(m + 1)]
    ks = np.arange(-reach, reach + 1)
    weights = np.where(ks % 2 == 0, 1.0, -1.0) * np.exp(-alpha0 * ks)
    K = {}
    n = {}
    for i in range(m + 1):
        if j > 0:
            idx = 2 * ks + 2 * r - j + i
        else:
            idx = 2 * ks + 2 * r + j - i
        K[i] = K_c * math.fsum((weights * b_values(idx)).tolist())
        n[i] = (i - m) // 2
    scale = 2.0 ** (1 - m)
    D_m = scale * math.fsum(w[i] * K[i] for i in range(m + 1) if (i - m) % 2 == 0)
    D_m1 = scale * math.fsum(w[i] * K[i] for i in range(m + 1) if (i - m) % 2 == 1)
    return DClass(D_m + D_m1, D_m, D_m1, K, n)


def E_at(m: int, j: int, c_values, D: dict, alpha0: float, reach: int) -> float:
    """E constant for index j from the a-law constants D and c values."""
    r = r_gamma(j)
    terms = []
    for k in range(-reach, reach + 1):
        l = k - j + 1
        if l == m or r_a(l, m) == 0:
            raise ValueError("E representative index too small for the requested reach")
        rho = r_a(l, m)
        sign = -1.0 if (j + k + rho - r) % 2 else 1.0
        terms.append(sign * math.exp(-alpha0 * (rho - r)) * D[class_of(l)] * float(c_values(k)))
    return math.fsum(terms)


def _representatives(m, reach):
    base = 2 * reach + 2 * m + 12
    return {(s, p): s * (base + p) for s in (1, -1) for p in (0, 1)}


def _certify(name, full, check):
    scale = max(abs(v) for v in full.values())
    for key, v in full.items():
        if abs(v - check[key]) > 1e-10 * scale:
            raise ConvergenceError(
                "asymptotic_profile", f"{name} lattice sum for class {key} not converged to 1e-10"
            )


@lru_cache(maxsize=16)
def _profile(m: int) -> AsymptoticProfile:
    alpha0 = spectrum(m).alpha0
    lim = amplitude_constants(m)
    reach_d = _sum_reach(alpha0, 1.0)
    reach_e = _sum_reach(alpha0, 0.5)
    # shorter sums whose truncation is ~1e-12; agreement certifies 1e-10
    check_d = _sum_reach(alpha0, 1.0, 1e-12)
    check_e = _sum_reach(alpha0, 0.5, 1e-12)
    b_tab = series_table("b", m, 2 * reach_d + 2 * m + 8)
    c_tab = series_table("c", m, reach_e + 2)

    def b_values(idx):
        return b_tab.get(idx)

    def c_values(k):
        return c_tab.get(k)

    # convergence is judged relative to the largest entry: for odd m one
    # parity class per sign has D = 0 up to rounding
    D, parts, D_check = {}, {}, {}
    for (s, p), j in _representatives(m, 0).items():
        full = D_at(m, j, b_values, alpha0, lim.K_c, reach_d)
        D_check[(s, p)] = D_at(m, j, b_values, alpha0, lim.K_c, check_d).value
        D[(s, p)] = full.value
        parts[(s, p)] = full
    _certify("D", D, D_check)
    E, E_bracket, E_check = {}, {}, {}
    for (s, p), j in _representatives(m, reach_e).items():
        E[(s, p)] = E_at(m, j, c_values, D, alpha0, reach_e)
        E_check[(s, p)] = E_at(m, j, c_values, D, alpha0, check_e)
        delta = r_gamma(j) - r_bracket(j)
        E_bracket[(s, p)] = E[(s, p)] * (-1) ** delta * math.exp(-alpha0 * delta)
    _certify("E", E, E_check)
    return AsymptoticProfile(m, alpha0, lim.K_c, lim.K_b, D, parts, E, E_bracket)


def asymptotic_profile(sys_or_m) -> AsymptoticProfile:
    """Profile constants alpha0, K_c, K_b, D and E for the system's order.

    The lattice sums behind D and E need b and c far beyond double-precision
    quadrature, so they always use the series route regardless of how the
    system's own tables were built.
    """
    m = sys_or_m.m if isinstance(sys_or_m, WaveletSystem) else check_order(sys_or_m, 2)
    return _profile(m)


def class_constancy(m: int, sign: int, parity: int, which: str = "D") -> float:
    """Spread of D or E over several indices of one class, relative to the largest class."""
    prof = _profile(m)
    alpha0 = prof.alpha0
    lim = amplitude_constants(m)
    if which == "D":
        reach = _sum_reach(alpha0, 1.0)
        b_tab = series_table("b", m, 2 * reach + 2 * m + 8)
        j0 = _representatives(m, 0)[(sign, parity)]
        vals = [D_at(m, j, b_tab.get, alpha0, lim.K_c, reach).value for j in (j0, j0 + 2 * sign, j0 + 10 * sign)]
    else:
        reach = _sum_reach(alpha0, 0.5)
        c_tab = series_table("c", m, reach + 2)
        j0 = _representatives(m, reach)[(sign, parity)]
        vals = [E_at(m, j, c_tab.get, prof.D, alpha0, reach) for j in (j0, j0 + 2 * sign, j0 + 10 * sign)]
    # relative to the largest entry: odd m has classes with D = 0
    scale = max(abs(v) for v in (prof.D if which == "D" else prof.E).values())
    return max(abs(v - vals[0]) for v in vals) / scale
