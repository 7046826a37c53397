"""Orthonormal cardinal B-spline scaling functions and wavelets.

Builds certified coefficient tables for phi_m and psi_m, the decay constants
of those coefficients, and a periodic orthonormal wavelet transform.
"""
from ._version import __version__
from .bspline import eval_bspline, integer_samples, piecewise_form
from .coefficients import CoefficientTable, amplitude_constants, b_quadrature, c_quadrature, pm_eval
from .errors import (
    CacheIntegrityError,
    CertifiedRangeError,
    ConvergenceError,
    RootIsolationError,
    RoundoffFloorWarning,
    SplineWaveError,
)
from .euler_frobenius import alpha0, ef_coefficients, negative_roots, spectrum
from .kernels import BACKEND
from .system import (
    AsymptoticProfile,
    WaveletSystem,
    asymptotic_profile,
    build_system,
    gram_phi,
    phi_eval,
    psi_eval,
)
from .transform import DwtResult, FilterPair, derive_filters, dwt_analyze, dwt_synthesize
from .verify import VerificationReport, verify

__all__ = [
    "__version__",
    "BACKEND",
    "AsymptoticProfile",
    "CacheIntegrityError",
    "CertifiedRangeError",
    "CoefficientTable",
    "ConvergenceError",
    "DwtResult",
    "FilterPair",
    "RootIsolationError",
    "RoundoffFloorWarning",
    "SplineWaveError",
    "VerificationReport",
    "WaveletSystem",
    "alpha0",
    "amplitude_constants",
    "asymptotic_profile",
    "b_quadrature",
    "build_system",
    "c_quadrature",
    "derive_filters",
    "dwt_analyze",
    "dwt_synthesize",
    "ef_coefficients",
    "eval_bspline",
    "gram_phi",
    "integer_samples",
    "negative_roots",
    "phi_eval",
    "pm_eval",
    "psi_eval",
    "spectrum",
    "verify",
]
