from fractions import Fraction
from math import comb, factorial

import numpy as np
import pytest
from numpy.testing import assert_allclose

from splinewave.bspline import (
    autocorrelation_at,
    autocorrelation_sequence,
    check_order,
    eval_bspline,
    integer_samples,
    moment,
    piecewise_form,
)


def truncated_power(m, x):
    """Oracle: N_m(x) = sum_k (-1)^k binom(m, k) (x - k)_+^{m-1} / (m-1)!."""
    x = Fraction(x)
    total = Fraction(0)
    for k in range(m + 1):
        if x - k > 0:
            total += (-1) ** k * comb(m, k) * (x - k) ** (m - 1)
    return total / factorial(m - 1)


@pytest.mark.parametrize("m", range(2, 11))
def test_integer_samples_match_truncated_power(m):
    samples = integer_samples(m)
    assert len(samples) == m + 1
    for k in range(m + 1):
        assert samples[k] == truncated_power(m, k)


def test_known_samples():
    assert list(integer_samples(4)) == [0, Fraction(1, 6), Fraction(2, 3), Fraction(1, 6), 0]
    assert list(integer_samples(2)) == [0, 1, 0]


@pytest.mark.parametrize("m", [1, 2, 3, 4, 6, 9])
def test_eval_matches_oracle_on_grid(m):
    xs = np.linspace(-0.5, m + 0.5, 97)
    expected = [float(truncated_power(m, Fraction(x))) if m > 1 else float(0 <= x < 1) for x in xs]
    assert_allclose(eval_bspline(m, xs), expected, atol=1e-14)


@pytest.mark.parametrize("m", [2, 3, 5, 8])
def test_partition_of_unity(m):
    x = np.linspace(0.0, 1.0, 33)[:-1]
    total = sum(eval_bspline(m, x + k) for k in range(m))
    assert_allclose(total, 1.0, atol=1e-14)


@pytest.mark.parametrize("m", [2, 3, 4, 7])
def test_symmetry(m):
    x = np.linspace(0.0, m, 51)
    assert_allclose(eval_bspline(m, x), eval_bspline(m, m - x), atol=1e-14)


def test_scalar_returns_float():
    assert isinstance(eval_bspline(4, 2.0), float)
    assert eval_bspline(4, 2.0) == pytest.approx(2.0 / 3.0, abs=1e-15)


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_piecewise_form_agrees_with_evaluator(m):
    pp = piecewise_form(m)
    x = np.linspace(0.01, m - 0.01, 77)
    assert_allclose(pp(x), eval_bspline(m, x), atol=1e-14)


@pytest.mark.parametrize("m", [3, 4, 5, 6])
def test_piecewise_smoothness(m):
    pp = piecewise_form(m)
    for order in range(m - 1):
        assert all(d == 0 for d in pp.continuity_defects(order))
    # the (m-1)-th derivative jumps at interior knots
    assert any(d != 0 for d in pp.continuity_defects(m - 1))


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_autocorrelation_is_b2m_sample(m):
    s2m = integer_samples(2 * m)
    for n in range(-m, m + 1):
        assert autocorrelation_at(m, n) == (s2m[m + n] if abs(n) < m else 0)
    seq = autocorrelation_sequence(m)
    assert seq.sum() == pytest.approx(1.0, abs=1e-15)
    assert not seq.flags.writeable


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_moments(m):
    assert moment(m, 0) == 1
    assert moment(m, 1) == Fraction(m, 2)
    # variance of the sum of m uniform variables is m/12
    assert moment(m, 2) - moment(m, 1) ** 2 == Fraction(m, 12)


@pytest.mark.parametrize("bad", [0, -1])
def test_check_order_rejects_small(bad):
    with pytest.raises(ValueError):
        check_order(bad)


@pytest.mark.parametrize("bad", [2.5, "3", None])
def test_check_order_rejects_non_integers(bad):
    with pytest.raises(TypeError):
        check_order(bad)
