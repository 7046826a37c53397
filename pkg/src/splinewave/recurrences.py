"""Generalized binomials and the finite recurrences B_k^l, C_k^l.

The ratios

    R(j, k) = binom(-1/2, j) binom(-1/2, k-j) / binom(-1/2, k)
    S(i, k) = binom(1/2, i) binom(1/2, k-i) / binom(1/2, k)

are formed from log-magnitudes with explicit signs.  The log-magnitudes are
accumulated from the exact one-step ratios |binom(a, n)| / |binom(a, n-1)| =
|1 - (a+1)/n| with a compensated running sum, which keeps them accurate to
a few ulps even at n ~ 10^4 (plain log-gamma differences lose ~1e-12 there).

B_k^l converges to its limit only like O(1/k).  The limit is therefore
taken in closed form from the root product of P_m, and the tables are
checked against it by Richardson extrapolation in h = 1/k.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bspline import check_order
from .errors import ConvergenceError
from .euler_frobenius import mu_values

_HALF = {"minus": -0.5, "plus": 0.5}


def _compensated_cumsum(steps: np.ndarray) -> np.ndarray:
    out = np.empty(len(steps) + 1)
    out[0] = 0.0
    s = 0.0
    c = 0.0
    for i, x in enumerate(steps):
        y = x - c
        t = s + y
        c = (t - s) - y
        s = t
        out[i + 1] = s
    return out


@lru_cache(maxsize=None)
def _log_abs_binom_table(kind: str, n_max: int) -> np.ndarray:
    a = _HALF[kind]
    n = np.arange(1, n_max + 1, dtype=np.float64)
    steps = np.log(np.abs(1.0 - (a + 1.0) / n))
    if kind == "minus":
        steps = np.log1p(-0.5 / n)
    table = _compensated_cumsum(steps)
    table.flags.writeable = False
    return table


def log_abs_binom(a: float, k):
    """Return ``(log|binom(a, k)|, sign)`` for a = -1/2 or 1/2 and integer k >= 0."""
    if a == -0.5:
        kind = "minus"
    elif a == 0.5:
        kind = "plus"
    else:
        raise ValueError("only a = -1/2 and a = 1/2 are supported")
    k = np.asarray(k, dtype=np.int64)
    if np.any(k < 0):
        raise ValueError("k must be nonnegative")
    table = _log_abs_binom_table(kind, max(int(np.max(k)), 1))
    logs = table[k]
    if kind == "minus":
        sign = np.where(k % 2 == 0, 1.0, -1.0)
    else:
        sign = np.where(k == 0, 1.0, np.where(k % 2 == 1, 1.0, -1.0))
    if logs.ndim == 0:
        return float(logs), float(sign)
    return logs, sign


def _ratio_matrix(a: float, K: int) -> np.ndarray:
    """Matrix M[j, k] = ratio(j, k) for 1 <= j <= k <= K, zero elsewhere."""
    logs, sign = log_abs_binom(a, np.arange(K + 1))
    j = np.arange(K + 1)[:, None]
    k = np.arange(K + 1)[None, :]
    valid = (j >= 1) & (j <= k)
    jj = np.where(valid, j, 0)
    kj = np.where(valid, k - j, 0)
    lr = logs[jj] + logs[kj] - logs[k]
    sg = sign[jj] * sign[kj] * sign[k]
    return np.where(valid, sg * np.exp(np.where(valid, lr, 0.0)), 0.0)


@lru_cache(maxsize=8)
def _ratio_matrix_cached(a: float, K: int) -> np.ndarray:
    out = _ratio_matrix(a, K)
    out.flags.writeable = False
    return out


def ratio_R(j, k):
    """R(j, k) = binom(-1/2, j) binom(-1/2, k-j) / binom(-1/2, k)."""
    return _ratio(-0.5, j, k)


def ratio_S(i, k):
    """S(i, k) = binom(1/2, i) binom(1/2, k-i) / binom(1/2, k)."""
    return _ratio(0.5, i, k)


def _ratio(a, j, k):
    j = np.asarray(j, dtype=np.int64)
    k = np.asarray(k, dtype=np.int64)
    if np.any((j < 0) | (j > k)):
        raise ValueError("need 0 <= j <= k")
    lj, sj = log_abs_binom(a, j)
    lk, sk = log_abs_binom(a, k)
    lr, sr = log_abs_binom(a, k - j)
    return sj * sr * sk * np.exp(lj + lr - lk)


def _levels(mu: np.ndarray, a: float, K: int) -> np.ndarray:
    # X_k^{l+1} = sum_{j=1}^k ratio(j,k) q_l^j (1 + X_j^l), X^0 = 0,
    # with q_l = (mu_{l+2}+1)/(mu_{l+1}+1) (1-based mu).
    mat = _ratio_matrix_cached(a, K)
    prev = np.zeros(K + 1)
    powers = np.arange(K + 1, dtype=np.float64)
    for l in range(len(mu) - 1):
        q = (mu[l + 1] + 1.0) / (mu[l] + 1.0)
        w = np.exp(powers * np.log(q)) * (1.0 + prev)
        w[0] = 0.0
        prev = mat.T @ w
    return prev


def richardson_limit(depths, values) -> float:
    """Neville extrapolation of ``values`` sampled at ``depths`` to 1/k -> 0."""
    h = [1.0 / d for d in depths]
    p = [float(v) for v in values]
    n = len(h)
    for lev in range(1, n):
        for i in range(n - lev):
            p[i] = (h[i + lev] * p[i] - h[i] * p[i + 1]) / (h[i + lev] - h[i])
    return p[0]


def closed_form_limits(m) -> tuple:
    """Exact limits ``(B, C)`` from the root product of P_m.

    1 + B = prod_{i < m-1} sqrt((mu_i + 1) / (mu_i - mu_{m-1})) and
    1 + C = 1 / (1 + B).
    """
    m = check_order(m, 2)
    mu = mu_values(m)
    if m == 2:
        return 0.0, 0.0
    one_b = float(np.prod(np.sqrt((mu[:-1] + 1.0) / (mu[:-1] - mu[-1]))))
    return one_b - 1.0, 1.0 / one_b - 1.0


@dataclass(frozen=True)
class RecurrenceTable:
    """Values X_k^{m-2} for k = 0..K (entry 0 unused and equal to 0)."""

    kind: str
    m: int
    values: np.ndarray
    limit: float
    extrapolated: float
    cauchy_defect: float

    @property
    def depth(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, k):
        return self.values[k]


def _depth(K: int) -> int:
    K = int(K)
    if K < 64:
        raise ValueError("recurrence depth must be at least 64")
    return K


@lru_cache(maxsize=None)
def _recurrence(kind: str, m: int, K: int, certify_tol: float) -> RecurrenceTable:
    a = -0.5 if kind == "B" else 0.5
    mu = mu_values(m)
    values = _levels(mu, a, K)
    values.flags.writeable = False
    exact_b, exact_c = closed_form_limits(m)
    limit = exact_b if kind == "B" else exact_c
    cauchy = abs(values[K] - values[K // 2])
    if m == 2:
        return RecurrenceTable(kind, m, values, 0.0, 0.0, 0.0)
    depths = [K >> i for i in range(6) if (K >> i) >= 8]
    extrapolated = richardson_limit(depths, [values[d] for d in depths])
    if not abs(extrapolated - limit) <= certify_tol * (1.0 + abs(limit)):
        raise ConvergenceError(
            f"recurrence_{kind}",
            f"m={m}: extrapolated limit {extrapolated!r} disagrees with closed form "
            f"{limit!r} beyond {certify_tol:g} at depth K={K}",
        )
    return RecurrenceTable(kind, m, values, limit, extrapolated, cauchy)


def recurrence_B(m, K: int = 1024, certify_tol: float = 1e-6) -> RecurrenceTable:
    """Table B_k^{m-2}, k = 0..K, and its limit B (identically 0 for m = 2)."""
    return _recurrence("B", check_order(m, 2), _depth(K), float(certify_tol))


def recurrence_C(m, K: int = 1024, certify_tol: float = 1e-6) -> RecurrenceTable:
    """Table C_k^{m-2} built with S(i, k) in place of R(j, k); limit C."""
    return _recurrence("C", check_order(m, 2), _depth(K), float(certify_tol))
