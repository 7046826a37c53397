import json

import pytest

from splinewave.verify import (
    Check,
    default_tolerances,
    fit_slope,
    halving_change,
    verify,
)


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_default_tolerances_pass(systems, m):
    report = verify(systems(m))
    assert report.passed, report.to_text()


def test_report_contents(systems):
    report = verify(systems(2))
    names = {c.name for c in report.checks}
    for expected in (
        "two_scale_residual",
        "psi_alternating_flip_vs_bspline",
        "convolution_inverse",
        "c_slope",
        "b_slope",
        "a_plateau_vs_profile",
        "gamma_plateau_vs_profile",
        "psi_moment[p=0]",
        "psi_moment[p=1]",
        "gram_phi[k=0]",
        "psi_bracket",
    ):
        assert expected in names
    doc = json.loads(report.to_json())
    assert doc["passed"] is True
    assert set(doc["checks"][0]) == {"name", "measured", "target", "tolerance", "passed"}
    assert report.to_text().rstrip().endswith("(0 failing)")


def test_failures_are_entries(systems):
    report = verify(systems(2), {"c_slope": 1e-9})
    assert not report.passed
    assert [c.name for c in report.failures()] == ["c_slope"]


def test_unknown_tolerance_key(systems):
    with pytest.raises(ValueError):
        verify(systems(2), {"nonsense": 1.0})


def test_looser_tolerances_for_high_order():
    assert default_tolerances(5)["a_plateau"] > default_tolerances(4)["a_plateau"]


def test_check_helpers():
    assert Check.within("x", 1.01, 1.0, 0.02, relative=True).passed
    assert not Check.within("x", 1.03, 1.0, 0.02, relative=True).passed
    assert Check.at_most("x", -1e-9, 1e-8).passed


def test_fit_helpers():
    x = [1, 2, 3, 4, 5, 6]
    y = [2 * v + 1 for v in x]
    assert fit_slope(x, y) == pytest.approx(2.0)
    assert halving_change(x, y) == pytest.approx(0.0, abs=1e-12)
