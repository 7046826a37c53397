import warnings

import pytest

from splinewave.errors import RoundoffFloorWarning
from splinewave.system import build_system


@pytest.fixture(autouse=True)
def _quiet_floor_warnings():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RoundoffFloorWarning)
        yield


@pytest.fixture(scope="session")
def systems():
    """Default quadrature systems (eps = 1e-12) keyed by m."""
    cache = {}

    def get(m):
        if m not in cache:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RoundoffFloorWarning)
                cache[m] = build_system(m, 1e-12)
        return cache[m]

    return get


@pytest.fixture
def cache_env(tmp_path, monkeypatch):
    d = tmp_path / "cache"
    monkeypatch.setenv("SPLINEWAVE_CACHE_DIR", str(d))
    return d


_ACCEPTANCE_LINES = []


@pytest.fixture
def record_acceptance():
    """Print and collect one pass/fail line per acceptance criterion, then assert it."""

    def record(label, ok, detail):
        line = f"ACCEPTANCE {label}: {'PASS' if ok else 'FAIL'} ({detail})"
        print(line)
        _ACCEPTANCE_LINES.append(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
