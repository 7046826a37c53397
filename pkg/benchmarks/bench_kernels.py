"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--repeat N]

Prints the best wall time per kernel and backend, the speedup, and the
largest absolute difference between the two backends' outputs.
"""
import argparse
import timeit

import numpy as np

from splinewave.kernels import backends


def cases(rng):
    x = rng.uniform(-20.0, 20.0, 20000)
    coeffs = rng.standard_normal(81)
    samples = rng.standard_normal(4096)
    signal = rng.standard_normal(4096)
    filt = rng.standard_normal(55)
    coef = rng.standard_normal(2048)
    return {
        "bspline_values m=4": lambda k: k.bspline_values(4, x * 0.2 + 2.0),
        "spline_series m=4": lambda k: k.spline_series(4, coeffs, -40, x, 1.0),
        "cosine_coefficients 4096x64": lambda k: k.cosine_coefficients(samples, np.arange(64)),
        "periodic_analysis 4096": lambda k: k.periodic_analysis(signal, filt, -27),
        "periodic_synthesis 4096": lambda k: k.periodic_synthesis(coef, filt, -27, 4096),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    found = backends()
    if "cython" not in found:
        print("compiled backend not built; only the Python backend is available")
    rng = np.random.default_rng(0)
    print(f"{'kernel':32s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speedup':>8s} {'max |diff|':>11s}")
    for name, fn in cases(rng).items():
        times = {}
        outs = {}
        for label, mod in found.items():
            outs[label] = np.asarray(fn(mod))
            times[label] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat)) * 1e3
        if "cython" in found:
            diff = float(np.max(np.abs(outs["python"] - outs["cython"])))
            print(f"{name:32s} {times['python']:12.3f} {times['cython']:12.3f} "
                  f"{times['python'] / times['cython']:8.1f} {diff:11.2e}")
        else:
            print(f"{name:32s} {times['python']:12.3f} {'-':>12s} {'-':>8s} {'-':>11s}")


if __name__ == "__main__":
    main()
