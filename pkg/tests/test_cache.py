import json

import numpy as np
import pytest

from splinewave import cache
from splinewave.errors import CacheIntegrityError


def test_round_trip(cache_env):
    s1 = cache.cached_system(2, 1e-10)
    path = cache.cache_path(2, 1e-10, None, "quadrature")
    assert path.parent == cache_env and path.exists()
    s2 = cache.load(2, 1e-10, None, "quadrature")
    for name in ("c", "b", "a", "gamma"):
        np.testing.assert_array_equal(s1.tables()[name].values, s2.tables()[name].values)
        assert s1.tables()[name].tail_bound == s2.tables()[name].tail_bound
        np.testing.assert_array_equal(s1.tables()[name].majorant, s2.tables()[name].majorant)


def test_missing_entry(cache_env):
    assert cache.load(3, 1e-10, None, "quadrature") is None


def test_checksum_mismatch(cache_env):
    cache.cached_system(2, 1e-10)
    path = cache.cache_path(2, 1e-10, None, "quadrature")
    doc = json.loads(path.read_text())
    doc["payload"]["a"]["values"][0] += 1e-3
    path.write_text(json.dumps(doc))
    with pytest.raises(CacheIntegrityError, match="checksum"):
        cache.cached_system(2, 1e-10)


def test_unreadable(cache_env):
    cache.cached_system(2, 1e-10)
    cache.cache_path(2, 1e-10, None, "quadrature").write_text("{not json")
    with pytest.raises(CacheIntegrityError):
        cache.load(2, 1e-10, None, "quadrature")


def test_stale_version(cache_env, monkeypatch):
    cache.cached_system(2, 1e-10)
    monkeypatch.setattr(cache, "__version__", "0.0.0-other")
    with pytest.raises(cache.StaleCacheError):
        cache.cached_system(2, 1e-10, strict=True)
    # non-strict callers rebuild over the stale entry
    cache.cached_system(2, 1e-10)
    assert cache.load(2, 1e-10, None, "quadrature") is not None


def test_explicit_directory(tmp_path):
    cache.cached_system(2, 1e-10, directory=tmp_path)
    assert list(tmp_path.glob("*.json"))
