"""Command-line interface: ``splinewave {constants,coeffs,eval,verify,dwt}``.

Exit codes: 0 success, 1 verification checks failed, 2 usage or range
error, 3 convergence failure, 4 I/O or cache integrity failure.  JSON output
is one object per file with a ``schema_version`` field and floats written
with 17 significant digits; CSV output has a header row and LF line endings.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import cache
from ._version import __version__
from .bspline import eval_bspline
from .coefficients import amplitude_constants, direct_table, envelope, window_for
from .errors import CacheIntegrityError, ConvergenceError, RoundoffFloorWarning
from .euler_frobenius import spectrum
from .system import METHODS, asymptotic_profile, phi_eval, psi_eval
from .transform import DwtResult, derive_filters, dwt_analyze, dwt_synthesize
from .verify import verify

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
EXIT_USAGE = 2
EXIT_CONVERGENCE = 3
EXIT_IO = 4


class UsageError(ValueError):
    pass


# --------------------------------------------------------------------------
# serialization


def _fmt_float(v: float) -> str:
    if not math.isfinite(v):
        raise ValueError(f"cannot serialize non-finite value {v!r}")
    return "%.17g" % v


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, (bool, type(None), str)):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _document(command: str, body: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, "version": __version__, **body}


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt_float(v) if isinstance(v, float) else str(v) for v in row))
    return "\n".join(lines) + "\n"


def _emit(text: str, output):
    if output:
        with open(output, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# commands


def _system(args, strict=False):
    return cache.cached_system(
        args.m, args.eps, args.method, args.nodes,
        directory=args.cache_dir, use_cache=not args.no_cache, strict=strict,
    )


def _require_wavelet_order(m):
    if m < 2:
        raise UsageError(f"wavelet constants need m >= 2, got m = {m}")


def cmd_constants(args) -> int:
    _require_wavelet_order(args.m)
    spec = spectrum(args.m)
    prof = asymptotic_profile(args.m)
    lim = amplitude_constants(args.m)
    pd = prof.to_dict()
    body = {
        "m": args.m,
        "roots": [float(v) for v in spec.roots],
        "mu": [float(v) for v in spec.mu],
        "alpha0": float(spec.alpha0),
        "A": float(lim.A),
        "B": float(lim.B),
        "C": float(lim.C),
        "K_c": float(lim.K_c),
        "K_b": float(lim.K_b),
        "D": pd["D"],
        "E": pd["E"],
        "E_bracket": pd["E_bracket"],
        "r_conventions": pd["r_conventions"],
    }
    if args.format == "json":
        text = dumps(_document("constants", body)) + "\n"
    else:
        rows = []
        for key, val in body.items():
            if key == "r_conventions":
                continue
            if isinstance(val, list):
                rows += [(f"{key}[{i}]", float(v)) for i, v in enumerate(val)]
            elif isinstance(val, dict):
                rows += [(f"{key}[{k}]", float(v)) for k, v in val.items()]
            else:
                rows.append((key, float(val) if key != "m" else val))
        if args.format == "csv":
            text = _csv(("name", "value"), rows)
        else:
            text = "".join(f"{k:>24} = {v if isinstance(v, int) else _fmt_float(v)}\n" for k, v in rows)
    _emit(text, args.output)
    return EXIT_OK


def cmd_coeffs(args) -> int:
    _require_wavelet_order(args.m)
    kind = args.kind
    if kind in ("c", "b"):
        jmax = args.jmax if args.jmax is not None else window_for(kind, args.m, args.eps)
        if args.method == "quadrature" and envelope(kind, args.m, jmax) < 1e-15:
            warnings.warn(
                f"jmax = {jmax} reaches below the quadrature roundoff floor; consider --method series",
                RoundoffFloorWarning,
                stacklevel=1,
            )
        table = direct_table(kind, args.m, jmax, args.method, args.nodes)
        js = np.arange(-jmax, jmax + 1)
        values = table.get(js)
    else:
        sys_ = _system(args)
        table = sys_.tables()[kind]
        jmax = args.jmax if args.jmax is not None else max(-table.lo, table.hi)
        if jmax > max(-table.lo, table.hi):
            raise UsageError(
                f"jmax = {jmax} exceeds the {kind} window [{table.lo}, {table.hi}] certified at eps = {args.eps:g}; "
                "lower --eps to widen it"
            )
        js = np.arange(-jmax, jmax + 1)
        values = table.get(js)
    meta = {
        "kind": kind,
        "m": args.m,
        "eps": args.eps,
        "method": table.method,
        "jmax": int(jmax),
        "tail_bound": table.tail_bound,
        "value_error": table.value_error,
    }
    if args.format == "json":
        body = dict(meta, j=[int(j) for j in js], values=[float(v) for v in values])
        text = dumps(_document("coeffs", body)) + "\n"
    elif args.format == "csv":
        text = _csv(("j", "value", "tail_bound"), [(int(j), float(v), float(table.tail_bound)) for j, v in zip(js, values)])
    else:
        head = " ".join(f"{k}={v}" for k, v in meta.items())
        text = f"# {head}\n" + "".join(f"{int(j):6d} {_fmt_float(float(v))}\n" for j, v in zip(js, values))
    _emit(text, args.output)
    return EXIT_OK


def _grid(args, default):
    if args.x:
        return np.asarray(args.x, dtype=np.float64)
    start = default[0] if args.start is None else args.start
    stop = default[1] if args.stop is None else args.stop
    if args.num < 1:
        raise UsageError("--num must be >= 1")
    return np.linspace(start, stop, args.num)


def cmd_eval(args) -> int:
    if args.which == "bspline":
        if args.m < 1:
            raise UsageError("B-spline order must be >= 1")
        x = _grid(args, (0.0, float(args.m)))
        y = np.atleast_1d(eval_bspline(args.m, x))
    else:
        _require_wavelet_order(args.m)
        x = _grid(args, (-float(args.m + 2), float(args.m + 2)))
        sys_ = _system(args)
        y = np.atleast_1d(phi_eval(sys_, x) if args.which == "phi" else psi_eval(sys_, x))
    if args.format == "json":
        body = {"which": args.which, "m": args.m, "x": [float(v) for v in x], "value": [float(v) for v in y]}
        text = dumps(_document("eval", body)) + "\n"
    elif args.format == "csv":
        text = _csv(("x", "value"), [(float(a), float(b)) for a, b in zip(x, y)])
    else:
        text = "".join(f"{_fmt_float(float(a))} {_fmt_float(float(b))}\n" for a, b in zip(x, y))
    _emit(text, args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    _require_wavelet_order(args.m)
    sys_ = _system(args, strict=True)
    report = verify(sys_)
    if args.format == "json":
        text = dumps(_document("verify", report.to_dict())) + "\n"
    elif args.format == "csv":
        text = _csv(
            ("name", "measured", "target", "tolerance", "passed"),
            [(c.name, c.measured, c.target, c.tolerance, int(c.passed)) for c in report.checks],
        )
    else:
        text = report.to_text()
    _emit(text, args.output)
    if args.output:
        sys.stderr.write(f"verify m={args.m}: {'PASS' if report.passed else 'FAIL'}\n")
    return EXIT_OK if report.passed else EXIT_CHECKS_FAILED


def read_signal(path) -> np.ndarray:
    """Single-column CSV; a non-numeric first line is taken as the header."""
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if lines:
        try:
            float(lines[0].split(",")[0])
        except ValueError:
            lines = lines[1:]
    try:
        return np.array([float(ln.split(",")[0]) for ln in lines], dtype=np.float64)
    except ValueError as exc:
        raise UsageError(f"{path}: non-numeric sample ({exc})") from exc


def cmd_dwt(args) -> int:
    _require_wavelet_order(args.m)
    if not args.input:
        raise UsageError("dwt needs --input")
    sys_ = _system(args)
    fp = derive_filters(sys_, args.truncation)
    if args.direction == "analyze":
        signal = read_signal(args.input)
        result = dwt_analyze(fp, signal, args.levels)
        body = {"m": args.m, "truncation_eps": args.truncation, "offset": fp.offset, **result.to_dict()}
        if args.round_trip:
            back = dwt_synthesize(fp, result)
            err = float(np.linalg.norm(back - signal) / np.linalg.norm(signal))
            body["round_trip_error"] = err
            sys.stderr.write(f"round-trip relative l2 error: {err:.3e}\n")
        text = dumps(_document("dwt", body)) + "\n"
    else:
        try:
            doc = json.loads(Path(args.input).read_text())
            result = DwtResult.from_dict(doc)
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise UsageError(f"{args.input}: not a dwt analysis file ({exc})") from exc
        out = dwt_synthesize(fp, result)
        text = _csv(("value",), [(float(v),) for v in out])
    _emit(text, args.output)
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def _common(p, formats=("csv", "json", "text"), default_format="json"):
    p.add_argument("--m", type=int, required=True, help="spline order")
    p.add_argument("--eps", type=float, default=1e-12, help="certified tail tolerance of the tables")
    p.add_argument("--method", choices=METHODS, default="quadrature", help="route for c and b")
    p.add_argument("--nodes", type=int, default=None, help="trapezoid nodes (default: automatic)")
    p.add_argument("--format", choices=formats, default=default_format)
    p.add_argument("--output", default=None, help="output file (default: stdout)")
    p.add_argument("--no-cache", action="store_true", help="build tables without the disk cache")
    p.add_argument("--cache-dir", default=None, help="cache directory (default: $SPLINEWAVE_CACHE_DIR)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="splinewave", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="roots, mu, alpha0, amplitudes and profile constants")
    _common(p)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("coeffs", help="coefficient table over [-jmax, jmax]")
    _common(p, default_format="csv")
    p.add_argument("--kind", choices=("c", "b", "a", "gamma"), required=True)
    p.add_argument("--jmax", type=int, default=None)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("eval", help="phi, psi or N_m on a grid")
    _common(p, default_format="csv")
    p.add_argument("--which", choices=("phi", "psi", "bspline"), required=True)
    p.add_argument("--x", type=float, action="append", help="evaluation point (repeatable)")
    p.add_argument("--start", type=float, default=None)
    p.add_argument("--stop", type=float, default=None)
    p.add_argument("--num", type=int, default=401)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="run the verification battery")
    _common(p, default_format="text")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dwt", help="periodic wavelet transform of a single-column CSV signal")
    _common(p)
    p.add_argument("--input", default=None)
    p.add_argument("--direction", choices=("analyze", "synthesize"), default="analyze")
    p.add_argument("--levels", type=int, default=1)
    p.add_argument("--truncation", type=float, default=1e-9, help="filter truncation eps")
    p.add_argument("--round-trip", action="store_true", help="report the reconstruction error")
    p.set_defaults(func=cmd_dwt)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConvergenceError as exc:
        sys.stderr.write(f"splinewave: convergence failure in stage '{exc.stage}': {exc}\n")
        return EXIT_CONVERGENCE
    except CacheIntegrityError as exc:
        sys.stderr.write(f"splinewave: cache integrity failure in stage '{exc.stage}': {exc}\n")
        return EXIT_IO
    except OSError as exc:
        sys.stderr.write(f"splinewave: I/O error: {exc}\n")
        return EXIT_IO
    except ValueError as exc:
        sys.stderr.write(f"splinewave: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
