"""Cardinal B-splines N_m: evaluation, exact integer samples, piecewise form.

N_1 is the indicator of [0, 1) and N_m = N_{m-1} * N_1, so N_m is supported
on [0, m], is a polynomial of degree m - 1 on each [k, k + 1) and lies in
C^{m-2}.  Exact quantities (samples, autocorrelations, moments) use
``fractions.Fraction``; floats only appear at the API boundary.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from numbers import Integral

import numpy as np

from . import kernels


def check_order(m, minimum: int = 1) -> int:
    """Validate a spline order and return it as a plain ``int``."""
    if isinstance(m, bool) or not isinstance(m, Integral):
        raise TypeError(f"spline order must be an integer, got {m!r}")
    m = int(m)
    if m < minimum:
        raise ValueError(f"spline order must be >= {minimum}, got {m}")
    return m


@dataclass(frozen=True)
class RationalSamples:
    """Exact values N_m(k) for k = 0..m."""

    m: int
    samples: tuple

    def __len__(self):
        return len(self.samples)

    def __getitem__(self, k):
        return self.samples[k]

    def __iter__(self):
        return iter(self.samples)

    def as_float(self) -> np.ndarray:
        return np.array([float(s) for s in self.samples])


@lru_cache(maxsize=None)
def _samples(m: int) -> tuple:
    if m == 1:
        return (Fraction(1), Fraction(0))
    prev = _samples(m - 1)
    out = []
    for k in range(m + 1):
        left = prev[k] if k <= m - 1 else Fraction(0)
        right = prev[k - 1] if k >= 1 else Fraction(0)
        out.append((k * left + (m - k) * right) / (m - 1))
    return tuple(out)


def integer_samples(m) -> RationalSamples:
    """Exact integer samples ``N_m(0), ..., N_m(m)``.

    >>> [str(v) for v in integer_samples(4)]
    ['0', '1/6', '2/3', '1/6', '0']
    """
    m = check_order(m)
    return RationalSamples(m, _samples(m))


def eval_bspline(m, x):
    """Evaluate N_m at ``x`` (scalar or array), right-continuous at knots."""
    m = check_order(m)
    out = kernels.bspline_values(m, np.asarray(x, dtype=np.float64))
    if np.ndim(x) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class PiecewisePolynomial:
    """N_m as m polynomial pieces in the local variable t = x - k on [k, k+1).

    ``pieces[k][p]`` is the exact coefficient of t**p on the k-th interval.
    """

    m: int
    pieces: tuple

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        k = np.floor(x)
        t = x - k
        out = np.zeros_like(x)
        for i, row in enumerate(self.pieces):
            coeffs = [float(c) for c in row]
            val = np.zeros_like(x)
            for c in reversed(coeffs):
                val = val * t + c
            out = np.where(k == i, val, out)
        return out if out.ndim else float(out)

    def derivative_at(self, piece: int, order: int, t):
        """Exact ``order``-th derivative of piece ``piece`` at local ``t``."""
        t = Fraction(t)
        total = Fraction(0)
        for p, c in enumerate(self.pieces[piece]):
            if p >= order:
                fall = 1
                for q in range(order):
                    fall *= p - q
                total += c * fall * t ** (p - order)
        return total

    def continuity_defects(self, order: int) -> list:
        """Jumps of the ``order``-th derivative at the knots 0, 1, ..., m."""
        jumps = []
        for k in range(self.m + 1):
            left = self.derivative_at(k - 1, order, 1) if k >= 1 else Fraction(0)
            right = self.derivative_at(k, order, 0) if k < self.m else Fraction(0)
            jumps.append(right - left)
        return jumps


@lru_cache(maxsize=None)
def _pieces(m: int) -> tuple:
    if m == 1:
        return ((Fraction(1),),)
    prev = _pieces(m - 1)
    # N_m(x) = int_{x-1}^{x} N_{m-1}(y) dy.  On [k, k+1) with x = k + t this is
    # int_t^1 P_{k-1}(s) ds + int_0^t P_k(s) ds.
    pieces = []
    for k in range(m):
        row = [Fraction(0)] * m
        if k - 1 >= 0:
            low = prev[k - 1]
            row[0] += sum(c / (p + 1) for p, c in enumerate(low))
            for p, c in enumerate(low):
                row[p + 1] -= c / (p + 1)
        if k < m - 1:
            for p, c in enumerate(prev[k]):
                row[p + 1] += c / (p + 1)
        pieces.append(tuple(row))
    return tuple(pieces)


def piecewise_form(m) -> PiecewisePolynomial:
    """Exact piecewise-polynomial representation of N_m."""
    m = check_order(m)
    return PiecewisePolynomial(m, _pieces(m))


def autocorrelation_at(m, n: int) -> Fraction:
    """Exact value of the integral of N_m(x) N_m(x - n), equal to N_{2m}(m + n)."""
    m = check_order(m)
    n = int(n)
    if abs(n) >= m:
        return Fraction(0)
    return _samples(2 * m)[m + n]


@lru_cache(maxsize=None)
def autocorrelation_sequence(m: int) -> np.ndarray:
    """Float autocorrelations for n = -(m-1)..(m-1)."""
    m = check_order(m)
    seq = np.array([float(autocorrelation_at(m, n)) for n in range(-m + 1, m)])
    seq.flags.writeable = False
    return seq


def moment(m, p: int) -> Fraction:
    """Exact moment: the integral of x**p N_m(x) over [0, m]."""
    m = check_order(m)
    if p < 0:
        raise ValueError("moment order must be nonnegative")
    total = Fraction(0)
    for k, row in enumerate(_pieces(m)):
        # (k + t)^p = sum_q binom(p, q) k^(p-q) t^q
        for q in range(p + 1):
            w = comb(p, q) * Fraction(k) ** (p - q)
            if w == 0:
                continue
            total += w * sum(c / (q + r + 1) for r, c in enumerate(row))
    return total
