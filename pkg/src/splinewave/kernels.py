"""Backend selection for the hot kernels.

The compiled extension ``splinewave._fast`` is used when it imports; the
pure-Python module ``splinewave._fallback`` is used otherwise, or when the
environment variable ``SPLINEWAVE_PURE_PYTHON`` is set to a non-empty value
other than ``0``.
"""
import os

from . import _fallback

_force_pure = os.environ.get("SPLINEWAVE_PURE_PYTHON", "") not in ("", "0")

if _force_pure:
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _fast as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"

local_basis = _impl.local_basis
bspline_values = _impl.bspline_values
spline_series = _impl.spline_series
cosine_coefficients = _impl.cosine_coefficients
periodic_analysis = _impl.periodic_analysis
periodic_synthesis = _impl.periodic_synthesis


def backends():
    """Return the available backend modules keyed by name."""
    found = {"python": _fallback}
    try:
        from . import _fast
        found["cython"] = _fast
    except ImportError:
        pass
    return found
