import math
from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose

from splinewave.bspline import integer_samples
from splinewave.euler_frobenius import (
    alpha0,
    alpha0_formula,
    alpha0_from_root,
    compensated_horner,
    ef_coefficients,
    mu_values,
    negative_roots,
    spectrum,
)


def exact_value(coeffs, x):
    x = Fraction(x)
    return sum(Fraction(c) * x**i for i, c in enumerate(coeffs))


def test_known_coefficients():
    assert ef_coefficients(2) == (1, 4, 1)
    assert ef_coefficients(3) == (1, 26, 66, 26, 1)
    assert ef_coefficients(4) == (1, 120, 1191, 2416, 1191, 120, 1)


@pytest.mark.parametrize("m", range(2, 13))
def test_coefficients_palindromic_and_sum(m):
    c = ef_coefficients(m)
    assert c == c[::-1]
    # sum of N_{2m} samples is 1
    assert sum(c) == math.factorial(2 * m - 1)
    assert all(isinstance(v, int) and v > 0 for v in c)


def test_coefficients_exceed_double_range():
    assert max(ef_coefficients(12)) > 2**53


@pytest.mark.parametrize("m", [2, 5, 10, 14])
def test_compensated_horner_matches_exact(m):
    c = ef_coefficients(m)
    for x in (-0.3, -0.987654321, -1.7, -13.25):
        value, scale = compensated_horner(c, x)
        exact = float(exact_value(c, x))
        assert abs(value - exact) <= 1e-15 * scale


@pytest.mark.parametrize("m", range(2, 17))
def test_roots_bracket_a_sign_change_exactly(m):
    c = ef_coefficients(m)
    for r in negative_roots(m)[: m - 1]:
        lo, hi = r * (1 + 1e-12), r * (1 - 1e-12)
        assert exact_value(c, lo) * exact_value(c, hi) < 0


@pytest.mark.parametrize("m", range(2, 8))
def test_roots_against_numpy(m):
    c = np.array(ef_coefficients(m), dtype=np.float64)
    ref = np.sort(np.roots(c[::-1]).real)[::-1]
    assert_allclose(negative_roots(m), ref, rtol=1e-9)


@pytest.mark.parametrize("m", range(2, 11))
def test_reciprocal_pairs_and_order(m):
    lam = negative_roots(m)
    assert len(lam) == 2 * m - 2
    assert np.all(np.diff(lam) < 0)
    assert np.all((lam[: m - 1] > -1) & (lam[: m - 1] < 0))
    assert_allclose(lam * lam[::-1], 1.0, rtol=1e-13)


def test_m2_closed_form():
    assert negative_roots(2)[0] == pytest.approx(-2 + math.sqrt(3), rel=1e-15)
    assert mu_values(2)[0] == pytest.approx(0.5, rel=1e-14)
    assert alpha0(2) == pytest.approx(math.log(2 + math.sqrt(3)), rel=1e-14)


@pytest.mark.parametrize("m", range(2, 12))
def test_alpha0_formulas_agree(m):
    mu = float(mu_values(m)[-1])
    log_form = math.log((math.sqrt(mu + 1) + math.sqrt(mu)) / (math.sqrt(mu + 1) - math.sqrt(mu)))
    assert alpha0_formula(mu) == pytest.approx(log_form, rel=1e-12)
    assert alpha0_from_root(m) == pytest.approx(alpha0(m), rel=1e-12)


@pytest.mark.parametrize("m", range(3, 10))
def test_mu_strictly_decreasing_positive(m):
    mu = mu_values(m)
    assert np.all(mu > 0)
    assert np.all(np.diff(mu) < 0)


@pytest.mark.parametrize("m", [2, 4, 8])
def test_spectrum_record(m):
    s = spectrum(m)
    assert s.m == m
    assert np.max(s.residuals) <= 1e-11
    assert len(s.inner_roots) == m - 1
    assert not s.roots.flags.writeable
    d = s.to_dict()
    assert d["alpha0"] == s.alpha0 and len(d["roots"]) == 2 * m - 2


def test_samples_identity():
    # E_{2m-1}(1) / (2m-1)! = sum of N_{2m} samples
    m = 5
    assert sum(integer_samples(2 * m)) == 1
    assert sum(ef_coefficients(m)) == math.factorial(2 * m - 1)


def test_rejects_m1():
    with pytest.raises(ValueError):
        spectrum(1)
