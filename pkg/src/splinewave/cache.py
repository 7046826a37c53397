"""On-disk cache of built coefficient tables.

Entries are keyed by (m, eps, quadrature nodes, method) in the file name and
carry the code version and a sha256 checksum of their payload.  A checksum
or key mismatch raises :class:`CacheIntegrityError`; a version mismatch is a
stale entry, which callers either refuse or rebuild.

The directory defaults to ``$XDG_CACHE_HOME/splinewave`` (``~/.cache``) and
is overridden by ``SPLINEWAVE_CACHE_DIR``.
"""
from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

import numpy as np

from ._version import __version__
from .coefficients import CoefficientTable, amplitude_constants
from .errors import CacheIntegrityError
from .euler_frobenius import spectrum
from .system import WaveletSystem, build_system

SCHEMA_VERSION = 1
TABLE_NAMES = ("c", "b", "a", "gamma")


def cache_dir(override=None) -> Path:
    if override:
        return Path(override)
    env = os.environ.get("SPLINEWAVE_CACHE_DIR")
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "splinewave"


def cache_key(m, eps, nodes, method, version=None) -> dict:
    version = __version__ if version is None else version
    return {"m": int(m), "eps": float(eps), "nodes": nodes, "method": method, "version": version}


def cache_path(m, eps, nodes, method, directory=None) -> Path:
    name = f"m{int(m)}_eps{float(eps):.6e}_nodes{nodes if nodes is not None else 'auto'}_{method}.json"
    return cache_dir(directory) / name


def _table_payload(t: CoefficientTable) -> dict:
    d = t.to_dict()
    d["majorant"] = [float(v) for v in t.majorant] if t.majorant is not None else None
    d["majorant_lo"] = int(t.majorant_lo)
    return d


def _table_from_payload(d: dict) -> CoefficientTable:
    t = CoefficientTable.from_dict(d)
    if d.get("majorant") is None:
        return t
    return CoefficientTable(
        t.kind, t.m, t.lo, t.hi, t.values, t.tail_bound, t.method, t.value_error,
        np.asarray(d["majorant"], dtype=np.float64), int(d["majorant_lo"]),
    )


def _checksum(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def save(sys: WaveletSystem, directory=None) -> Path:
    path = cache_path(sys.m, sys.eps, sys.nodes, sys.method, directory)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {name: _table_payload(t) for name, t in sys.tables().items()}
    doc = {
        "schema_version": SCHEMA_VERSION,
        "key": cache_key(sys.m, sys.eps, sys.nodes, sys.method),
        "checksum": _checksum(payload),
        "payload": payload,
    }
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(doc))
    os.replace(tmp, path)
    return path


class StaleCacheError(CacheIntegrityError):
    """Cache entry written by a different code version."""


def load(m, eps, nodes, method, directory=None):
    """Cached system, or None when no entry exists.

    Raises :class:`CacheIntegrityError` on a corrupted entry and
    :class:`StaleCacheError` when the entry was written by another version.
    """
    path = cache_path(m, eps, nodes, method, directory)
    if not path.exists():
        return None
    try:
        doc = json.loads(path.read_text())
        key, payload, checksum = doc["key"], doc["payload"], doc["checksum"]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise CacheIntegrityError(path, f"unreadable cache entry ({exc})") from exc
    if _checksum(payload) != checksum:
        raise CacheIntegrityError(path, "checksum mismatch")
    expected = cache_key(m, eps, nodes, method)
    if key.get("version") != expected["version"]:
        raise StaleCacheError(path, f"written by version {key.get('version')}, running {expected['version']}")
    if key != expected:
        raise CacheIntegrityError(path, f"key mismatch: {key} != {expected}")
    try:
        tables = {name: _table_from_payload(payload[name]) for name in TABLE_NAMES}
    except (KeyError, ValueError, TypeError) as exc:
        raise CacheIntegrityError(path, f"malformed table ({exc})") from exc
    return WaveletSystem(
        int(m), float(eps), method, nodes, spectrum(m), amplitude_constants(m),
        tables["c"], tables["b"], tables["a"], tables["gamma"],
    )


def cached_system(m, eps=1e-12, method="quadrature", nodes=None, directory=None, use_cache=True, strict=False):
    """Load from the cache or build and store.

    ``strict`` refuses stale entries instead of rebuilding over them;
    corrupted entries are always refused.
    """
    if not use_cache:
        return build_system(m, eps, method, nodes)
    try:
        sys = load(m, eps, nodes, method, directory)
    except StaleCacheError:
        if strict:
            raise
        sys = None
    if sys is None:
        sys = build_system(m, eps, method, nodes)
        save(sys, directory)
    return sys
