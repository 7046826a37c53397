import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from splinewave import _fallback, kernels
from splinewave.bspline import eval_bspline

BACKENDS = kernels.backends()


def test_backend_selected():
    assert kernels.BACKEND in BACKENDS


def test_pure_python_switch(monkeypatch):
    import importlib

    monkeypatch.setenv("SPLINEWAVE_PURE_PYTHON", "1")
    mod = importlib.reload(kernels)
    try:
        assert mod.BACKEND == "python"
        assert mod.spline_series is _fallback.spline_series
    finally:
        monkeypatch.delenv("SPLINEWAVE_PURE_PYTHON")
        importlib.reload(kernels)


@pytest.mark.parametrize("name", sorted(BACKENDS))
@pytest.mark.parametrize("m", [1, 2, 3, 5, 8])
def test_local_basis_partition(name, m):
    t = np.linspace(0, 1, 17, endpoint=False)
    B = BACKENDS[name].local_basis(m, t)
    assert B.shape == (17, m)
    assert_allclose(B.sum(axis=1), 1.0, atol=1e-14)


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_backend_parity(name):
    mod = BACKENDS[name]
    rng = np.random.default_rng(1)
    x = rng.uniform(-12, 12, 500)
    coeffs = rng.standard_normal(31)
    assert_allclose(mod.bspline_values(4, x), _fallback.bspline_values(4, x), atol=1e-15)
    assert_allclose(
        mod.spline_series(3, coeffs, -15, x, 2.0), _fallback.spline_series(3, coeffs, -15, x, 2.0), atol=1e-14
    )
    samples = rng.standard_normal(64)
    js = np.arange(-5, 20)
    assert_allclose(mod.cosine_coefficients(samples, js), _fallback.cosine_coefficients(samples, js), atol=1e-15)
    sig = rng.standard_normal(32)
    filt = rng.standard_normal(9)
    assert_allclose(mod.periodic_analysis(sig, filt, -4), _fallback.periodic_analysis(sig, filt, -4), atol=1e-13)
    coef = rng.standard_normal(16)
    assert_allclose(
        mod.periodic_synthesis(coef, filt, -4, 32), _fallback.periodic_synthesis(coef, filt, -4, 32), atol=1e-13
    )


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_synthesis_is_adjoint(name):
    mod = BACKENDS[name]
    rng = np.random.default_rng(5)
    x = rng.standard_normal(40)
    y = rng.standard_normal(20)
    filt = rng.standard_normal(7)
    lhs = mod.periodic_analysis(x, filt, 3) @ y
    rhs = x @ mod.periodic_synthesis(y, filt, 3, 40)
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_cosine_coefficients_of_cosine():
    n = 32
    f = np.cos(2 * np.pi * 3 * np.arange(n) / n)
    out = kernels.cosine_coefficients(f, np.arange(8))
    expected = np.zeros(8)
    expected[3] = 0.5
    assert_allclose(out, expected, atol=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 9), st.floats(-3.0, 12.0, allow_nan=False))
def test_bspline_nonnegative_and_supported(m, x):
    v = eval_bspline(m, x)
    assert v >= 0.0
    if x < 0 or x >= m:
        assert v == 0.0


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-5, 5, allow_nan=False), min_size=3, max_size=12), st.floats(-4, 14, allow_nan=False))
def test_spline_series_is_linear_sum(coeffs, x):
    coeffs = np.array(coeffs)
    out = kernels.spline_series(3, coeffs, -1, np.array([x]), 1.0)[0]
    ref = sum(c * eval_bspline(3, x - j) for j, c in zip(range(-1, len(coeffs) - 1), coeffs))
    assert out == pytest.approx(ref, abs=1e-12)
