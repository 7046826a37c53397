"""Periodic orthonormal discrete wavelet transform built from the a_j.

The lowpass filter is h_j = a_j / sqrt(2) truncated where |h_j| <= eps, and
the highpass is g_j = (-1)^j h_{1-j}.  One analysis level maps a length-N
signal x to

    s_k = sum_j h_j x[2k + j - offset],   d_k = sum_j g_j x[2k + j - offset]

(indices mod N), where ``offset`` is the rounded energy centroid of h, so
the coefficients stay aligned with the signal.  Synthesis is the adjoint.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import kernels


@dataclass(frozen=True)
class FilterPair:
    m: int
    lowpass: np.ndarray
    lowpass_start: int
    highpass: np.ndarray
    highpass_start: int
    offset: int
    truncation_eps: float

    def __post_init__(self):
        self.lowpass.flags.writeable = False
        self.highpass.flags.writeable = False

    @property
    def length(self) -> int:
        return max(len(self.lowpass), len(self.highpass))

    def lowpass_indices(self) -> np.ndarray:
        return np.arange(self.lowpass_start, self.lowpass_start + len(self.lowpass))

    def highpass_indices(self) -> np.ndarray:
        return np.arange(self.highpass_start, self.highpass_start + len(self.highpass))

    def shift_orthogonality(self, kmax: int = 6) -> float:
        """max_k |sum_j h_j h_{j-2k} - delta_k0| over |k| <= kmax."""
        corr = np.correlate(self.lowpass, self.lowpass, mode="full")
        mid = len(self.lowpass) - 1
        worst = 0.0
        for k in range(-kmax, kmax + 1):
            pos = mid + 2 * k
            val = corr[pos] if 0 <= pos < len(corr) else 0.0
            worst = max(worst, abs(val - (1.0 if k == 0 else 0.0)))
        return worst


def derive_filters(sys, eps: float = 1e-9) -> FilterPair:
    """Truncated orthonormal filter pair from the system's a-table."""
    eps = float(eps)
    a = sys.a_table
    floor = max(a.tail_bound, a.value_error) / math.sqrt(2.0)
    if not eps > 0 or eps < floor:
        raise ValueError(
            f"eps = {eps:g} is below the a-table's certified floor {floor:g}; rebuild with a smaller eps"
        )
    h_full = np.asarray(a.values) / math.sqrt(2.0)
    keep = np.nonzero(np.abs(h_full) > eps)[0]
    if len(keep) == 0:
        raise ValueError("truncation removes every filter tap")
    first, last = int(keep[0]), int(keep[-1])
    h = h_full[first : last + 1].copy()
    h_lo = a.lo + first
    h_idx = np.arange(h_lo, h_lo + len(h))
    # g_j = (-1)^j h_{1-j}
    g_idx = 1 - h_idx[::-1]
    g = h[::-1] * np.where(g_idx % 2 == 0, 1.0, -1.0)
    energy = h * h
    offset = int(round(float(np.sum(energy * h_idx) / np.sum(energy))))
    return FilterPair(sys.m, h, int(h_lo), g, int(g_idx[0]), offset, eps)


@dataclass
class DwtResult:
    levels: int
    details: list
    approximation: np.ndarray
    boundary: str = "periodic"

    @property
    def size(self) -> int:
        return len(self.approximation) + sum(len(d) for d in self.details)

    def to_dict(self) -> dict:
        return {
            "levels": self.levels,
            "boundary": self.boundary,
            "details": [[float(v) for v in d] for d in self.details],
            "approximation": [float(v) for v in self.approximation],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DwtResult":
        details = [np.asarray(d, dtype=np.float64) for d in data["details"]]
        approx = np.asarray(data["approximation"], dtype=np.float64)
        if int(data["levels"]) != len(details):
            raise ValueError("levels does not match the number of detail bands")
        return cls(int(data["levels"]), details, approx, data.get("boundary", "periodic"))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _check_length(n, levels, filter_length):
    if levels < 1:
        raise ValueError("levels must be >= 1")
    if n % (2**levels):
        raise ValueError(f"signal length {n} is not divisible by 2^levels = {2**levels}")
    if n < filter_length:
        raise ValueError(f"signal length {n} is shorter than the filter length {filter_length}")


def dwt_analyze(fp: FilterPair, signal, levels: int) -> DwtResult:
    """Multi-level periodic analysis; details are ordered finest first."""
    x = np.asarray(signal, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("signal must be one-dimensional")
    levels = int(levels)
    _check_length(len(x), levels, fp.length)
    details = []
    for _ in range(levels):
        d = kernels.periodic_analysis(x, fp.highpass, fp.highpass_start - fp.offset)
        x = kernels.periodic_analysis(x, fp.lowpass, fp.lowpass_start - fp.offset)
        details.append(np.asarray(d))
    return DwtResult(levels, details, np.asarray(x))


def dwt_synthesize(fp: FilterPair, result: DwtResult) -> np.ndarray:
    """Inverse of :func:`dwt_analyze` (adjoint cascade)."""
    if result.boundary != "periodic":
        raise ValueError(f"unsupported boundary {result.boundary!r}")
    if len(result.details) != result.levels:
        raise ValueError("levels does not match the number of detail bands")
    x = np.asarray(result.approximation, dtype=np.float64)
    for d in reversed(result.details):
        d = np.asarray(d, dtype=np.float64)
        if len(d) != len(x):
            raise ValueError(f"detail band of length {len(d)} does not match approximation length {len(x)}")
        n = 2 * len(x)
        x = kernels.periodic_synthesis(x, fp.lowpass, fp.lowpass_start - fp.offset, n) + kernels.periodic_synthesis(
            d, fp.highpass, fp.highpass_start - fp.offset, n
        )
    return np.asarray(x)


def round_trip_error(fp: FilterPair, signal, levels: int) -> float:
    """Relative l2 error of synthesize(analyze(signal))."""
    x = np.asarray(signal, dtype=np.float64)
    y = dwt_synthesize(fp, dwt_analyze(fp, x, levels))
    return float(np.linalg.norm(y - x) / np.linalg.norm(x))
