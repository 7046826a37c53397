import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_allclose

from splinewave.transform import (
    DwtResult,
    derive_filters,
    dwt_analyze,
    dwt_synthesize,
    round_trip_error,
)


@pytest.fixture(scope="module")
def fp2(systems):
    return derive_filters(systems(2), 1e-9)


def test_filter_invariants(fp2):
    assert math.fsum(fp2.lowpass) == pytest.approx(math.sqrt(2), abs=1e-7)
    assert math.fsum(fp2.highpass) == pytest.approx(0.0, abs=1e-7)
    assert fp2.shift_orthogonality(6) <= 1e-7
    assert np.all(np.abs(fp2.lowpass[[0, -1]]) > 1e-9)


def test_highpass_alternating_flip(fp2):
    h = dict(zip(fp2.lowpass_indices(), fp2.lowpass))
    for j, g in zip(fp2.highpass_indices(), fp2.highpass):
        assert g == (-1) ** (j % 2) * h[1 - j]


def test_offset_is_energy_centroid(fp2):
    # h is symmetric about m/2 = 1 for m = 2
    assert fp2.offset == 1


def test_rejects_eps_below_table_floor(systems):
    with pytest.raises(ValueError, match="floor"):
        derive_filters(systems(2), 1e-15)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_round_trip_and_energy(systems, m):
    fp = derive_filters(systems(m), 1e-9)
    x = np.random.default_rng(m).standard_normal(256)
    res = dwt_analyze(fp, x, 3)
    assert res.size == 256
    assert [len(d) for d in res.details] == [128, 64, 32]
    energy = sum(float(d @ d) for d in res.details) + float(res.approximation @ res.approximation)
    assert energy == pytest.approx(float(x @ x), rel=1e-6)
    assert round_trip_error(fp, x, 3) <= 1e-6


def test_constant_signal(fp2):
    res = dwt_analyze(fp2, np.full(64, 3.0), 3)
    for d in res.details:
        assert np.max(np.abs(d)) <= 1e-7 * 3.0
    assert_allclose(res.approximation, 3.0 * 2 ** 1.5, rtol=1e-8)


def test_shift_by_two_covariance(fp2):
    x = np.random.default_rng(7).standard_normal(128)
    a = dwt_analyze(fp2, x, 1)
    b = dwt_analyze(fp2, np.roll(x, 2), 1)
    assert_allclose(b.details[0], np.roll(a.details[0], 1), atol=1e-12)
    assert_allclose(b.approximation, np.roll(a.approximation, 1), atol=1e-12)


def test_error_scales_linearly_with_truncation(systems):
    s = systems(2)
    x = np.random.default_rng(3).standard_normal(256)
    eps = np.array([1e-6, 1e-9, 1e-12])
    err = np.array([round_trip_error(derive_filters(s, e), x, 3) for e in eps])
    slope = np.polyfit(np.log(eps), np.log(err), 1)[0]
    assert slope == pytest.approx(1.0, abs=0.2)


@pytest.mark.parametrize("n,levels", [(100, 3), (24, 4), (8, 1)])
def test_length_validation(fp2, n, levels):
    with pytest.raises(ValueError):
        dwt_analyze(fp2, np.ones(n), levels)


def test_synthesize_shape_mismatch(fp2):
    res = dwt_analyze(fp2, np.ones(64), 2)
    res.details[0] = res.details[0][:-1]
    with pytest.raises(ValueError):
        dwt_synthesize(fp2, res)


def test_result_json_round_trip(fp2):
    x = np.random.default_rng(0).standard_normal(64)
    res = dwt_analyze(fp2, x, 2)
    back = DwtResult.from_dict(res.to_dict())
    assert_allclose(dwt_synthesize(fp2, back), x, atol=1e-8)
    with pytest.raises(ValueError):
        DwtResult.from_dict(dict(res.to_dict(), levels=5))


@settings(max_examples=25, deadline=None)
@given(
    arrays(np.float64, 128, elements=st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)),
    st.integers(1, 2),
)
def test_round_trip_property(systems, x, levels):
    fp = derive_filters(systems(2), 1e-9)
    norm = np.linalg.norm(x)
    back = dwt_synthesize(fp, dwt_analyze(fp, x, levels))
    assert np.linalg.norm(back - x) <= 1e-6 * max(norm, 1e-300)
