"""Build the optional compiled kernels.

The package works without them; ``splinewave.kernels`` falls back to the
pure-Python implementation when the extension is missing.
"""
import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover - build without Cython
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "splinewave._fast",
                ["src/splinewave/_fast.pyx"],
                include_dirs=[np.get_include()],
                # no -ffast-math: the compensated sums rely on strict IEEE order
                extra_compile_args=["-O2"],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
