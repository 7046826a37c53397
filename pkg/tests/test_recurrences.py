import math
from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose

from splinewave.coefficients import amplitude_A, pm_eval
from splinewave.errors import ConvergenceError
from splinewave.euler_frobenius import mu_values
from splinewave.recurrences import (
    closed_form_limits,
    log_abs_binom,
    ratio_R,
    ratio_S,
    recurrence_B,
    recurrence_C,
    richardson_limit,
)


def exact_binom(a, k):
    out = Fraction(1)
    for i in range(k):
        out *= (Fraction(a) - i) / (i + 1)
    return out


@pytest.mark.parametrize("a", [-0.5, 0.5])
def test_log_abs_binom_exact(a):
    ks = np.arange(0, 60)
    logs, sign = log_abs_binom(a, ks)
    for k in ks:
        b = exact_binom(Fraction(a), int(k))
        assert sign[k] == (1 if b > 0 else -1)
        assert logs[k] == pytest.approx(math.log(abs(b)), abs=1e-13)


def test_log_abs_binom_deep_accuracy():
    # log|binom(-1/2, k)| = log(binom(2k, k)) - 2k log 2 with an exact big integer
    k = 5000
    logs, _ = log_abs_binom(-0.5, k)
    ref = math.log(math.comb(2 * k, k)) - 2 * k * math.log(2)
    assert logs == pytest.approx(ref, abs=1e-12)


def test_log_abs_binom_rejects():
    with pytest.raises(ValueError):
        log_abs_binom(1.5, 3)
    with pytest.raises(ValueError):
        log_abs_binom(-0.5, -1)


@pytest.mark.parametrize("k", [1, 2, 7, 30])
def test_ratios_exact(k):
    for j in range(0, k + 1):
        R = exact_binom(-0.5, j) * exact_binom(-0.5, k - j) / exact_binom(-0.5, k)
        S = exact_binom(0.5, j) * exact_binom(0.5, k - j) / exact_binom(0.5, k)
        assert float(ratio_R(j, k)) == pytest.approx(float(R), rel=1e-12)
        assert float(ratio_S(j, k)) == pytest.approx(float(S), rel=1e-12)


def test_ratio_signs():
    k = np.arange(1, 201)
    for kk in k[::13]:
        j = np.arange(0, kk + 1)
        assert np.all(ratio_R(j, kk) > 0)
        s = ratio_S(j, kk)
        assert np.all(s[1:-1] < 0) if kk > 1 else True
        assert s[0] == pytest.approx(1.0) and s[-1] == pytest.approx(1.0)


def test_ratio_rejects_out_of_range():
    with pytest.raises(ValueError):
        ratio_R(5, 3)


def test_richardson_exact_for_linear_in_h():
    depths = [16, 32, 64, 128]
    values = [3.0 + 2.0 / d - 5.0 / d**2 for d in depths]
    assert richardson_limit(depths, values) == pytest.approx(3.0, abs=1e-12)


def test_m2_recurrences_vanish():
    assert closed_form_limits(2) == (0.0, 0.0)
    assert recurrence_B(2).limit == 0.0
    assert np.all(recurrence_B(2).values == 0)


@pytest.mark.parametrize("m", [3, 4, 5, 6, 8])
def test_limits_certified_against_closed_form(m):
    B, C = closed_form_limits(m)
    bt, ct = recurrence_B(m), recurrence_C(m)
    assert bt.extrapolated == pytest.approx(B, abs=1e-6 * (1 + abs(B)))
    assert ct.extrapolated == pytest.approx(C, abs=1e-6 * (1 + abs(C)))
    assert (1 + B) * (1 + C) == pytest.approx(1.0, rel=1e-14)
    assert B > 0 > C


@pytest.mark.parametrize("m", [3, 4, 5])
def test_B_table_reproduces_inverse_sqrt_symbol(m):
    """1/sqrt(P) = A (1 + sum_k (-1)^k binom(-1/2,k) (mu+1)^{-k} (1 + B_k) sin^{2k}(theta/2))."""
    mu = float(mu_values(m)[-1])
    A = amplitude_A(m)
    bt = recurrence_B(m)
    logs, sign = log_abs_binom(-0.5, np.arange(1, 1025))
    k = np.arange(1, 1025)
    for theta in (0.3, 1.0, 2.0, math.pi):
        s2 = math.sin(theta / 2) ** 2
        terms = (-1.0) ** k * sign * np.exp(logs) * (s2 / (mu + 1)) ** k * (1 + bt.values[1:1025])
        series = A * (1 + math.fsum(terms.tolist()))
        assert series == pytest.approx(pm_eval(m, theta) ** -0.5, rel=1e-12)


@pytest.mark.parametrize("m", [3, 4, 5])
def test_C_table_reproduces_sqrt_symbol(m):
    """sqrt(P) = A^{-1} (1 + sum_k (-1)^k binom(1/2,k) (mu+1)^{-k} (1 + C_k) sin^{2k}(theta/2))."""
    mu = float(mu_values(m)[-1])
    A = amplitude_A(m)
    ct = recurrence_C(m)
    logs, sign = log_abs_binom(0.5, np.arange(1, 1025))
    k = np.arange(1, 1025)
    for theta in (0.3, 1.0, 2.0, math.pi):
        s2 = math.sin(theta / 2) ** 2
        terms = (-1.0) ** k * sign * np.exp(logs) * (s2 / (mu + 1)) ** k * (1 + ct.values[1:1025])
        series = (1 + math.fsum(terms.tolist())) / A
        assert series == pytest.approx(pm_eval(m, theta) ** 0.5, rel=1e-12)


def test_ratio_R_bound_exhaustive():
    bound = math.sqrt(2 * math.e**3)
    worst = 0.0
    for k in range(1, 201):
        worst = max(worst, float(np.max(ratio_R(np.arange(0, k + 1), k))))
    assert worst <= bound


def test_depth_validation():
    with pytest.raises(ValueError):
        recurrence_B(4, K=32)


def test_certificate_failure_raises():
    # an absurd tolerance cannot be met at shallow depth
    with pytest.raises(ConvergenceError) as info:
        recurrence_B(5, K=64, certify_tol=1e-15)
    assert info.value.stage == "recurrence_B"
