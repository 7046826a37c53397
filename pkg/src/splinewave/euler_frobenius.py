"""Euler-Frobenius polynomials and their negative roots.

E_{2m-1}(z) = (2m-1)! z^{m-1} sum_{k=-m+1}^{m-1} N_{2m}(m+k) z^k has integer,
palindromic coefficients and 2m-2 simple negative roots that pair up as
lambda, 1/lambda.  The m-1 roots in (-1, 0) determine the quantities
mu_i = (lambda_i + 1)^2 / (4|lambda_i|) and the decay exponent alpha0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bspline import check_order, integer_samples
from .errors import RootIsolationError

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


@lru_cache(maxsize=None)
def ef_coefficients(m) -> tuple:
    """Integer coefficients of E_{2m-1}/z^{m-1}, ascending powers of z."""
    m = check_order(m, 2)
    samples = integer_samples(2 * m)
    fact = math.factorial(2 * m - 1)
    out = []
    for k in range(-m + 1, m):
        v = samples[m + k] * fact
        if v.denominator != 1:  # pragma: no cover - would be a bug in the samples
            raise ArithmeticError("non-integer Euler-Frobenius coefficient")
        out.append(int(v))
    return tuple(out)


def compensated_horner(coeffs, x):
    """Evaluate an integer polynomial (ascending coefficients) in double-double.

    Each coefficient is split exactly into two doubles, so values are
    correct even when coefficients exceed 2**53.  Returns ``(value, scale)``
    where ``scale = sum |a_i| |x|^i`` is the natural magnitude for relative
    residuals.
    """
    x = np.asarray(x, dtype=np.float64)
    hi = [float(c) for c in coeffs]
    lo = [float(c - int(h)) for c, h in zip(coeffs, hi)]
    sh = np.full_like(x, hi[-1])
    sl = np.full_like(x, lo[-1])
    scale = np.full_like(x, abs(hi[-1]))
    ax = np.abs(x)
    for ch, cl in zip(reversed(hi[:-1]), reversed(lo[:-1])):
        p, pe = _two_prod(sh, x)
        pl = sl * x + pe
        s, se = _two_sum(p, ch)
        se = se + (pl + cl)
        sh = s + se
        sl = se - (sh - s)
        scale = scale * ax + abs(ch)
    value = sh + sl
    if value.ndim == 0:
        return float(value), float(scale)
    return value, scale


def _sign_grid():
    # logarithmic in |x| toward 0 and in 1 + x toward -1
    toward_zero = -np.logspace(-0.0005, -19.0, 8000)
    toward_minus_one = -1.0 + np.logspace(-19.0, -0.31, 4000)
    grid = np.unique(np.concatenate([toward_zero, toward_minus_one]))
    return grid[(grid > -1.0) & (grid < 0.0)]


def _bisect(coeffs, a, b, fa):
    # invariant: sign(E(a)) == fa, sign(E(b)) == -fa
    for _ in range(200):
        mid = 0.5 * (a + b)
        if abs(b - a) <= 1e-14 * abs(mid) or mid in (a, b):
            break
        fm, _ = compensated_horner(coeffs, mid)
        if fm == 0.0:
            return mid, mid
        if (fm > 0) == (fa > 0):
            a = mid
        else:
            b = mid
    return a, b


def _polish(coeffs, root, lo, hi):
    # two safeguarded Newton steps on the float derivative
    deriv = [i * c for i, c in enumerate(coeffs)][1:]
    best = root
    best_res = abs(compensated_horner(coeffs, root)[0])
    for _ in range(2):
        f, _ = compensated_horner(coeffs, best)
        df, _ = compensated_horner(deriv, best)
        if df == 0.0 or f == 0.0:
            break
        cand = best - f / df
        if not (lo <= cand <= hi):
            break
        res = abs(compensated_horner(coeffs, cand)[0])
        if res >= best_res:
            break
        best, best_res = cand, res
    return best


@lru_cache(maxsize=None)
def _inner_roots(m: int) -> tuple:
    coeffs = ef_coefficients(m)
    grid = _sign_grid()
    values, _ = compensated_horner(coeffs, grid)
    signs = np.sign(values)
    exact = grid[signs == 0.0]
    keep = signs != 0.0
    grid, signs = grid[keep], signs[keep]
    changes = np.nonzero(signs[:-1] != signs[1:])[0]
    if len(changes) + len(exact) != m - 1:
        raise RootIsolationError(
            f"expected {m - 1} sign changes on (-1, 0) for m={m}, found "
            f"{len(changes) + len(exact)}"
        )
    roots = list(exact)
    for i in changes:
        a, b = grid[i], grid[i + 1]
        lo, hi = _bisect(coeffs, a, b, signs[i])
        lo, hi = min(lo, hi), max(lo, hi)
        roots.append(_polish(coeffs, 0.5 * (lo + hi), lo, hi))
    roots.sort(reverse=True)
    return tuple(float(r) for r in roots)


def negative_roots(m) -> np.ndarray:
    """All 2m-2 negative roots, ordered 0 > lambda_1 > ... > lambda_{2m-2}."""
    m = check_order(m, 2)
    inner = _inner_roots(m)
    outer = [1.0 / r for r in reversed(inner)]
    return np.array(list(inner) + outer)


def mu_values(m) -> np.ndarray:
    """mu_i = (lambda_i + 1)^2 / (4 |lambda_i|) for i = 1..m-1, decreasing."""
    m = check_order(m, 2)
    lam = np.array(_inner_roots(m))
    return (lam + 1.0) ** 2 / (4.0 * np.abs(lam))


def alpha0_formula(mu: float) -> float:
    """ln[(sqrt(mu+1) + sqrt(mu)) / (sqrt(mu+1) - sqrt(mu))], written as 2 asinh(sqrt(mu))."""
    return 2.0 * math.asinh(math.sqrt(mu))


def alpha0(m) -> float:
    """Decay exponent alpha0 computed from mu_{m-1}."""
    return alpha0_formula(float(mu_values(m)[-1]))


def alpha0_from_root(m) -> float:
    """Decay exponent alpha0 = -ln|lambda_{m-1}|, the root-based formula."""
    m = check_order(m, 2)
    return -math.log(abs(_inner_roots(m)[-1]))


@dataclass(frozen=True)
class EFSpectrum:
    m: int
    coefficients: tuple
    roots: np.ndarray
    mu: np.ndarray
    alpha0: float
    residuals: np.ndarray

    @property
    def inner_roots(self) -> np.ndarray:
        return self.roots[: self.m - 1]

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "coefficients": list(self.coefficients),
            "roots": [float(v) for v in self.roots],
            "mu": [float(v) for v in self.mu],
            "alpha0": self.alpha0,
            "max_relative_residual": float(np.max(self.residuals)),
        }


@lru_cache(maxsize=None)
def spectrum(m) -> EFSpectrum:
    """Assemble the full spectrum record for order ``m``."""
    m = check_order(m, 2)
    coeffs = ef_coefficients(m)
    roots = negative_roots(m)
    values, scale = compensated_horner(coeffs, roots)
    residuals = np.abs(values) / scale
    mu = mu_values(m)
    for arr in (roots, mu, residuals):
        arr.flags.writeable = False
    return EFSpectrum(m, coeffs, roots, mu, alpha0_formula(float(mu[-1])), residuals)
