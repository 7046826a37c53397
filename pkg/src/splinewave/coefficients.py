"""Coefficient sequences c_j, b_j, a_j, gamma_j and the amplitude constants.

c_j and b_j are the Fourier coefficients of 1/sqrt(P_m) and sqrt(P_m), where
P_m(theta) = sum_k N_{2m}(m+k) cos(k theta) is the periodized autocorrelation
symbol of N_m.  They are computed either by the trapezoid rule on the
periodic grid or, for deep tails, by binomial series summed in log-space.

a_j (two-scale constants) and gamma_j (wavelet coefficients in the B-spline
basis of the finer scale) are composed from c and b by discrete
convolution, with certified bounds on everything that was truncated.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np

from . import kernels
from .bspline import check_order
from .errors import RoundoffFloorWarning
from .euler_frobenius import spectrum
from .recurrences import RecurrenceTable, log_abs_binom, recurrence_B, recurrence_C

ROUNDOFF_FLOOR = 5e-15
SERIES_REL_TOL = 1e-18
ENVELOPE_SAFETY = 2.0
MIN_NODES = 4096
KINDS = ("c", "b", "a", "gamma")


# --------------------------------------------------------------------------
# the symbol P_m


def pm_eval(m, theta):
    """P_m at angle ``theta`` via the root product.

    P_m(theta) = prod_k (1 - 2 lambda_k cos(theta) + lambda_k^2) / ((2m-1)! |lambda_k|)
    over the m-1 roots in (-1, 0).  For m = 1 the symbol is identically 1.
    """
    m = check_order(m)
    theta = np.asarray(theta, dtype=np.float64)
    if m == 1:
        out = np.ones_like(theta)
    else:
        lam = spectrum(m).inner_roots
        cos_t = np.cos(theta)
        out = np.ones_like(theta)
        for lk in lam:
            out = out * ((1.0 - 2.0 * lk * cos_t + lk * lk) / abs(lk))
        out = out / math.factorial(2 * m - 1)
    return float(out) if out.ndim == 0 else out


def pm_cosine_sum(m, theta):
    """P_m from its definition sum_k N_{2m}(m+k) cos(k theta)."""
    from .bspline import autocorrelation_sequence

    m = check_order(m)
    theta = np.asarray(theta, dtype=np.float64)
    seq = autocorrelation_sequence(m)
    out = np.zeros_like(theta)
    for idx, k in enumerate(range(-m + 1, m)):
        out = out + seq[idx] * np.cos(k * theta)
    return float(out) if out.ndim == 0 else out


# --------------------------------------------------------------------------
# quadrature route


def quadrature_nodes(j) -> int:
    """Default node count N = max(4096, 32 |j|)."""
    return max(MIN_NODES, 32 * abs(int(j)))


@lru_cache(maxsize=32)
def _symbol_samples(m: int, nodes: int, power: float) -> np.ndarray:
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    vals = pm_eval(m, theta) ** power
    vals.flags.writeable = False
    return vals


def _quadrature(m: int, js, power: float, nodes=None) -> np.ndarray:
    js = np.atleast_1d(np.asarray(js, dtype=np.int64))
    if nodes is None:
        nodes = quadrature_nodes(int(np.max(np.abs(js))) if js.size else 0)
    nodes = int(nodes)
    if nodes < 8 or nodes % 2:
        raise ValueError("quadrature node count must be an even integer >= 8")
    samples = _symbol_samples(m, nodes, power)
    return kernels.cosine_coefficients(samples, np.abs(js))


def _flag_floor(values, js, name):
    small = [int(j) for j, v in zip(np.atleast_1d(js), np.atleast_1d(values)) if abs(v) < ROUNDOFF_FLOOR]
    if small:
        warnings.warn(
            f"{name}: |value| below the roundoff floor {ROUNDOFF_FLOOR:g} at j = {small}; "
            "use the series route for these indices",
            RoundoffFloorWarning,
            stacklevel=3,
        )


def c_quadrature(m, j, nodes=None):
    """c_j = (1/2pi) int cos(j theta) / sqrt(P_m) by the periodic trapezoid rule."""
    m = check_order(m, 2)
    vals = _quadrature(m, j, -0.5, nodes)
    _flag_floor(vals, j, "c_quadrature")
    return float(vals[0]) if np.ndim(j) == 0 else vals


def b_quadrature(m, j, nodes=None):
    """b_j = (1/2pi) int cos(j theta) sqrt(P_m) by the periodic trapezoid rule."""
    m = check_order(m, 2)
    vals = _quadrature(m, j, 0.5, nodes)
    _flag_floor(vals, j, "b_quadrature")
    return float(vals[0]) if np.ndim(j) == 0 else vals


# --------------------------------------------------------------------------
# amplitude constants


@dataclass(frozen=True)
class RecurrenceLimits:
    m: int
    A: float
    B_table: RecurrenceTable
    B: float
    C_table: RecurrenceTable
    C: float
    K_c: float
    K_b: float

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "A": self.A,
            "B": self.B,
            "C": self.C,
            "K_c": self.K_c,
            "K_b": self.K_b,
            "B_extrapolated": self.B_table.extrapolated,
            "C_extrapolated": self.C_table.extrapolated,
            "B_cauchy_defect": self.B_table.cauchy_defect,
            "C_cauchy_defect": self.C_table.cauchy_defect,
            "recurrence_depth": self.B_table.depth,
        }


def amplitude_A(m) -> float:
    """A = 2^{-(m-1)} sqrt((2m-1)!) prod_i (mu_i + 1)^{-1/2}."""
    m = check_order(m, 2)
    mu = spectrum(m).mu
    log_a = (
        -(m - 1) * math.log(2.0)
        + 0.5 * math.lgamma(2 * m)
        - 0.5 * float(np.sum(np.log1p(mu)))
    )
    return math.exp(log_a)


@lru_cache(maxsize=None)
def amplitude_constants(m, depth: int = 1024) -> RecurrenceLimits:
    """A, B, C and the amplitudes K_c, K_b of the c and b decay laws.

    K_c = A (1 + B) (1 + 1/mu)^{1/4} / sqrt(pi) and
    K_b = (1 + C) (1 + 1/mu)^{-1/4} / (2 A sqrt(pi)), mu = mu_{m-1}.
    """
    m = check_order(m, 2)
    mu = float(spectrum(m).mu[-1])
    A = amplitude_A(m)
    bt = recurrence_B(m, depth)
    ct = recurrence_C(m, depth)
    K_c = A * (1.0 + bt.limit) * (1.0 + 1.0 / mu) ** 0.25 / math.sqrt(math.pi)
    K_b = (1.0 + ct.limit) * (1.0 + 1.0 / mu) ** -0.25 / (2.0 * A * math.sqrt(math.pi))
    return RecurrenceLimits(m, A, bt, bt.limit, ct, ct.limit, K_c, K_b)


# --------------------------------------------------------------------------
# series route


def _series_depth(m: int, j: int) -> int:
    # terms peak near k = j sqrt(1 + 1/mu) and then shrink by ~1/(mu+1) per step
    mu = float(spectrum(m).mu[-1])
    peak = j * math.sqrt(1.0 + 1.0 / mu)
    tail = (math.log(1.0 / SERIES_REL_TOL) + 20.0) / math.log1p(mu)
    need = int(peak + tail) + 64
    depth = 1024
    while depth < need:
        depth *= 2
    return depth


def _log_sum(logs: np.ndarray, signs: np.ndarray):
    top = float(np.max(logs))
    total = math.fsum((signs * np.exp(logs - top)).tolist())
    if total == 0.0:
        return 0.0, -math.inf
    return math.copysign(1.0, total), top + math.log(abs(total))


def _binomial_series(kind: str, m: int, j: int, depth=None):
    """Signed log-magnitude of sum_k |binom(a,k)| binom(2k,k-j) rho^k (1+X_k), k >= j.

    a = -1/2 with X = B for the c series, a = 1/2 with X = C for b.
    """
    mu = float(spectrum(m).mu[-1])
    log_rho = -math.log(4.0 * (mu + 1.0))
    if depth is None:
        depth = _series_depth(m, j)
    table = recurrence_B(m, depth) if kind == "c" else recurrence_C(m, depth)
    x = np.asarray(table.values)
    a = -0.5 if kind == "c" else 0.5
    k = np.arange(j, depth + 1, dtype=np.int64)
    kf = k.astype(np.float64)
    # one-step log ratios t_{k+1}/t_k without the (1 + X_k) factor
    if kind == "c":
        num = (2.0 * kf[:-1] + 1.0) ** 2
    else:
        num = np.abs((2.0 * kf[:-1] - 1.0) * (2.0 * kf[:-1] + 1.0))
    den = (kf[:-1] + 1.0 - j) * (kf[:-1] + 1.0 + j)
    ratios = math.exp(log_rho) * num / den
    steps = np.log(ratios)
    start, _ = log_abs_binom(a, j)
    logs = np.empty(len(k))
    logs[0] = start + j * log_rho
    # compensated running sum keeps the log terms accurate to a few ulps
    s, comp = logs[0], 0.0
    for i, step in enumerate(steps):
        y = step - comp
        t = s + y
        comp = (t - s) - y
        s = t
        logs[i + 1] = s
    one_x = 1.0 + x[k]
    term_logs = logs + np.log(np.abs(one_x))
    term_signs = np.sign(one_x)
    if kind == "b" and j == 0:
        # k = 0 carries binom(1/2, 0) = 1 with the opposite sign to k >= 1
        term_signs = term_signs.copy()
        term_signs[1:] = -term_signs[1:]
    sign, log_mag = _log_sum(term_logs, term_signs)
    # geometric tail certificate beyond the last term
    r_last = float(ratios[-1])
    r_star = max(r_last, 1.0 / (mu + 1.0))
    growth = (1.0 + max(float(np.max(np.abs(x[k[-1]:]))), abs(table.limit))) / abs(one_x[-1])
    if r_star >= 1.0:
        raise ValueError(f"series depth {depth} too small for j={j}")
    tail = math.exp(logs[-1] - log_mag) * abs(one_x[-1]) * growth * r_star / (1.0 - r_star)
    if tail > SERIES_REL_TOL:
        raise ValueError(
            f"recurrence table depth {depth} insufficient for j={j}: relative tail {tail:.3g}"
        )
    return sign, log_mag


def _series_with_retry(kind, m, j, depth):
    if depth is not None:
        return _binomial_series(kind, m, j, depth)
    depth = _series_depth(m, j)
    for _ in range(3):
        try:
            return _binomial_series(kind, m, j, depth)
        except ValueError:
            depth *= 2
    return _binomial_series(kind, m, j, depth)


def c_series(m, j, depth=None):
    """Return ``(sign, log|c_j|)`` from the exact pre-limit binomial series.

    c_j = (-1)^j A sum_{k>=j} |binom(-1/2,k)| binom(2k,k-j) (4(mu+1))^{-k} (1 + B_k^{m-2}).
    """
    m = check_order(m, 2)
    j = abs(int(j))
    A = amplitude_A(m)
    s, log_mag = _series_with_retry("c", m, j, depth)
    return (-1 if j % 2 else 1) * int(s), math.log(A) + log_mag


def b_series(m, j, depth=None):
    """Return ``(sign, log|b_j|)`` from the binomial series of sqrt(P_m).

    b_j = (-1)^{j+1} A^{-1} sum_{k>=j} |binom(1/2,k)| binom(2k,k-j) (4(mu+1))^{-k} (1 + C_k^{m-2})
    for j >= 1; for j = 0 the k = 0 term enters with a plus sign.
    """
    m = check_order(m, 2)
    j = abs(int(j))
    A = amplitude_A(m)
    s, log_mag = _series_with_retry("b", m, j, depth)
    sign = int(s) if j == 0 else (-1 if (j + 1) % 2 else 1) * int(s)
    return sign, log_mag - math.log(A)


def series_value(kind: str, m, j) -> float:
    """Float value of c_j or b_j from the series route."""
    sign, log_mag = (c_series if kind == "c" else b_series)(m, j)
    return sign * math.exp(log_mag)


# --------------------------------------------------------------------------
# envelopes and tables


ENVELOPE_CALIBRATION = 64


@lru_cache(maxsize=None)
def envelope_constant(kind: str, m) -> float:
    """Constant of the certified envelope for c or b.

    ENVELOPE_SAFETY times the asymptotic amplitude, raised to 1.05 times the
    largest scaled magnitude over 1 <= j <= 64 when pre-asymptotic indices
    exceed it (this happens for b at small j once m >= 3).
    """
    m = check_order(m, 2)
    lim = amplitude_constants(m)
    alpha = spectrum(m).alpha0
    power = 0.5 if kind == "c" else 1.5
    K = lim.K_c if kind == "c" else lim.K_b
    js = np.arange(1, ENVELOPE_CALIBRATION + 1)
    scaled = [abs(series_value(kind, m, j)) * j**power * math.exp(alpha * j) for j in js]
    return max(ENVELOPE_SAFETY * K, 1.05 * max(scaled))


def envelope(kind: str, m, j):
    """Certified magnitude envelope K_env e^{-alpha0 |j|} / |j|^p, valid for |j| >= 1.

    p = 1/2 for c and 3/2 for b; K_env is :func:`envelope_constant`.
    """
    if kind not in ("c", "b"):
        raise ValueError("envelopes exist for kind 'c' and 'b' only")
    m = check_order(m, 2)
    alpha = spectrum(m).alpha0
    K = envelope_constant(kind, m)
    jj = np.maximum(np.abs(np.asarray(j, dtype=np.float64)), 1.0)
    power = 0.5 if kind == "c" else 1.5
    out = K * np.exp(-alpha * jj) / jj**power
    return float(out) if out.ndim == 0 else out


def window_for(kind: str, m, eps: float) -> int:
    """Smallest J with envelope(J + 1) <= eps."""
    J = 1
    while envelope(kind, m, J + 1) > eps:
        J += 1
    return J


@dataclass(frozen=True)
class CoefficientTable:
    """Finite window ``lo..hi`` of one coefficient sequence.

    ``tail_bound`` bounds |value| for every index outside the window.
    ``value_error`` bounds the truncation error of the listed values
    (0 for directly computed c and b).
    """

    kind: str
    m: int
    lo: int
    hi: int
    values: np.ndarray
    tail_bound: float
    method: str
    value_error: float = 0.0
    majorant: np.ndarray = field(default=None, repr=False, compare=False)
    majorant_lo: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if len(self.values) != self.hi - self.lo + 1:
            raise ValueError("window and value count disagree")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("non-finite coefficient values")
        self.values.flags.writeable = False

    @property
    def window(self) -> tuple:
        return (self.lo, self.hi)

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, j):
        j = int(j)
        if not self.lo <= j <= self.hi:
            raise IndexError(f"index {j} outside window [{self.lo}, {self.hi}]")
        return float(self.values[j - self.lo])

    def get(self, j, default=0.0):
        """Value at ``j``, or ``default`` outside the window."""
        j = np.asarray(j, dtype=np.int64)
        pos = j - self.lo
        ok = (pos >= 0) & (pos < len(self.values))
        out = np.where(ok, self.values[np.clip(pos, 0, len(self.values) - 1)], default)
        return float(out) if out.ndim == 0 else out

    def bound(self, j):
        """Magnitude majorant at ``j`` (|value| inside, certified bound outside)."""
        j = np.asarray(j, dtype=np.int64)
        if self.majorant is None:
            inside = (j >= self.lo) & (j <= self.hi)
            out = np.where(inside, np.abs(self.get(j)), self.tail_bound)
        else:
            pos = j - self.majorant_lo
            ok = (pos >= 0) & (pos < len(self.majorant))
            out = np.where(ok, self.majorant[np.clip(pos, 0, len(self.majorant) - 1)], 0.0)
        return float(out) if out.ndim == 0 else out

    def to_csv(self) -> str:
        lines = ["j,value"]
        lines += [f"{j},{v:.17g}" for j, v in zip(self.indices, self.values)]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "m": self.m,
            "window": [self.lo, self.hi],
            "tail_bound": self.tail_bound,
            "value_error": self.value_error,
            "method": self.method,
            "values": [float(v) for v in self.values],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CoefficientTable":
        lo, hi = data["window"]
        return cls(
            kind=data["kind"],
            m=int(data["m"]),
            lo=int(lo),
            hi=int(hi),
            values=np.array(data["values"], dtype=np.float64),
            tail_bound=float(data["tail_bound"]),
            method=data["method"],
            value_error=float(data.get("value_error", 0.0)),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _with_envelope_majorant(kind, m, lo, values, reach):
    # |value| inside the window, envelope outside, over [-reach, reach]
    idx = np.arange(-reach, reach + 1)
    maj = np.asarray(envelope(kind, m, idx), dtype=np.float64)
    inside = (idx >= lo) & (idx < lo + len(values))
    maj[inside] = np.abs(values[idx[inside] - lo])
    return maj, -reach


def direct_table(kind: str, m, J: int, method: str = "series", nodes=None, reach=None) -> CoefficientTable:
    """c or b over [-J, J] by ``method`` ('series' or 'quadrature')."""
    m = check_order(m, 2)
    if kind not in ("c", "b"):
        raise ValueError("direct tables exist for kind 'c' and 'b'")
    J = int(J)
    js = np.arange(0, J + 1)
    if method == "series":
        half = np.array([series_value(kind, m, j) for j in js])
    elif method == "quadrature":
        half = _quadrature(m, js, -0.5 if kind == "c" else 0.5, nodes)
    else:
        raise ValueError(f"unknown method {method!r}")
    values = np.concatenate([half[:0:-1], half])
    tail = float(envelope(kind, m, J + 1))
    if reach is None:
        reach = J + _envelope_reach(m, tail)
    maj, maj_lo = _with_envelope_majorant(kind, m, -J, values, reach)
    return CoefficientTable(kind, m, -J, J, values, tail, method, 0.0, maj, maj_lo)


def _envelope_reach(m, tail):
    # extra indices until the envelope has dropped by a further factor 1e-20
    alpha = spectrum(m).alpha0
    return int(math.ceil(math.log(1e20) / alpha)) + 2


def _trim(maj, maj_lo, eps):
    """Smallest window outside of which the majorant is <= eps."""
    above = np.nonzero(maj > eps)[0]
    if len(above) == 0:
        raise ValueError("majorant is below eps everywhere; nothing to tabulate")
    return maj_lo + int(above[0]), maj_lo + int(above[-1])


def compose_a(c_table: CoefficientTable, b_table: CoefficientTable, eps=None) -> CoefficientTable:
    """Scaling constants a_j = 2^{1-m} sum_{i=0}^m binom(m,i) sum_n c_n b_{j-i-2n}.

    This is the two-scale relation of the orthonormal phi written with the
    refinement N_m(x) = 2^{1-m} sum_i binom(m, i) N_m(2x - i).
    """
    m = c_table.m
    if b_table.m != m:
        raise ValueError("c and b tables have different orders")
    w = np.array([comb(m, i) for i in range(m + 1)], dtype=np.float64) * 2.0 ** (1 - m)

    def upsample(arr):
        out = np.zeros(2 * len(arr) - 1)
        out[::2] = arr
        return out

    vals = np.convolve(np.convolve(upsample(c_table.values), w), b_table.values)
    lo_full = 2 * c_table.lo + b_table.lo
    maj = np.convolve(np.convolve(upsample(c_table.majorant), w), b_table.majorant)
    maj_lo = 2 * c_table.majorant_lo + b_table.majorant_lo
    inner = np.convolve(np.convolve(upsample(np.abs(c_table.values)), w), np.abs(b_table.values))
    # align the inner (in-window) magnitude sum with the majorant grid
    inner_full = np.zeros_like(maj)
    off = lo_full - maj_lo
    inner_full[off : off + len(inner)] = inner
    remainder = np.maximum(maj - inner_full, 0.0)
    return _finish(
        "a", m, vals, lo_full, maj, maj_lo, remainder, eps,
        method=f"composed({c_table.method})",
    )


def compose_gamma(a_table: CoefficientTable, c_table: CoefficientTable, eps=None) -> CoefficientTable:
    """Wavelet coefficients gamma_j = (-1)^j sum_k (-1)^k a_{k-j+1} c_k.

    psi(x) = sum_j gamma_j N_m(2x - j).
    """
    m = a_table.m
    # g_l = (-1)^l a_{1-l}; gamma = g * c
    def flip(arr, lo):
        idx = np.arange(lo, lo + len(arr))
        g_idx = 1 - idx[::-1]
        return arr[::-1] * np.where(g_idx % 2 == 0, 1.0, -1.0), int(g_idx[0])

    g, g_lo = flip(a_table.values, a_table.lo)
    vals = np.convolve(g, c_table.values)
    lo_full = g_lo + c_table.lo
    gm = np.abs(a_table.majorant[::-1])
    gm_lo = 1 - (a_table.majorant_lo + len(a_table.majorant) - 1)
    maj = np.convolve(gm, c_table.majorant)
    maj_lo = gm_lo + c_table.majorant_lo
    inner = np.convolve(np.abs(g), np.abs(c_table.values))
    inner_full = np.zeros_like(maj)
    off = lo_full - maj_lo
    inner_full[off : off + len(inner)] = inner
    remainder = np.maximum(maj - inner_full, 0.0) + _shift_error(a_table, c_table)
    return _finish(
        "gamma", m, vals, lo_full, maj, maj_lo, remainder, eps,
        method=f"composed({c_table.method})",
    )


def _shift_error(a_table, c_table):
    # value errors of a propagate through the convolution with c
    return a_table.value_error * float(np.sum(c_table.majorant))


def _finish(kind, m, vals, lo_full, maj, maj_lo, remainder, eps, method):
    if eps is None:
        lo, hi = lo_full, lo_full + len(vals) - 1
    else:
        lo, hi = _trim(maj, maj_lo, eps)
    idx = np.arange(lo, hi + 1)
    pos = idx - lo_full
    ok = (pos >= 0) & (pos < len(vals))
    window_vals = np.where(ok, vals[np.clip(pos, 0, len(vals) - 1)], 0.0)
    maj_idx = np.arange(maj_lo, maj_lo + len(maj))
    outside = (maj_idx < lo) | (maj_idx > hi)
    tail = float(np.max(maj[outside])) if np.any(outside) else 0.0
    inside = ~outside
    value_error = float(np.max(remainder[inside])) if np.any(inside) else 0.0
    # inside the window the sharp majorant is |value| + certified error
    maj = maj.copy()
    maj[inside] = np.abs(window_vals[maj_idx[inside] - lo]) + value_error
    return CoefficientTable(kind, m, lo, hi, window_vals, tail, method, value_error, maj, maj_lo)


def a_table_for(m, eps: float, method: str = "series", nodes=None) -> CoefficientTable:
    """Convenience: a-table with certified tail <= eps."""
    c, b = _cb_tables(m, eps, method, nodes)
    return compose_a(c, b, eps)


def _cb_tables(m, eps, method, nodes):
    inner = eps * 1e-2
    Jc = window_for("c", m, inner)
    Jb = window_for("b", m, inner)
    return direct_table("c", m, Jc, method, nodes), direct_table("b", m, Jb, method, nodes)


def a_coeff(m, j: int, tail_eps: float = 1e-12, *, c_table=None, b_table=None) -> float:
    """Single scaling constant a_j with certified truncation remainder < tail_eps."""
    m = check_order(m, 2)
    if c_table is None or b_table is None:
        c_table, b_table = _cb_tables(m, tail_eps, "series" if tail_eps < 1e-12 else "quadrature", None)
    floor = max(c_table.tail_bound, b_table.tail_bound)
    if tail_eps < floor:
        raise ValueError(f"tail_eps {tail_eps:g} is below the input tables' floor {floor:g}")
    a = compose_a(c_table, b_table)
    rem = _remainder_at(a, j)
    if rem >= tail_eps:
        raise ValueError(f"a_{j}: certified remainder {rem:g} not below tail_eps {tail_eps:g}")
    return a.get(j)


def gamma_coeff(m, j: int, tail_eps: float = 1e-12, *, a_table=None, c_table=None) -> float:
    """Single wavelet coefficient gamma_j with certified remainder < tail_eps."""
    m = check_order(m, 2)
    if a_table is None or c_table is None:
        method = "series" if tail_eps < 1e-12 else "quadrature"
        c_table, b_table = _cb_tables(m, tail_eps, method, None)
        a_table = compose_a(c_table, b_table)
    g = compose_gamma(a_table, c_table)
    rem = _remainder_at(g, j)
    if rem >= tail_eps:
        raise ValueError(f"gamma_{j}: certified remainder {rem:g} not below tail_eps {tail_eps:g}")
    return g.get(j)


def _remainder_at(table, j):
    if table.lo <= j <= table.hi:
        return table.value_error
    return float(table.bound(j))
