"""Compare the compiled and numpy monomial-sum kernels.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import time

import numpy as np

from universal_series import kernels
from universal_series._kernels_py import monomial_sum as py_sum

try:
    from universal_series._kernels import monomial_sum as c_sum
except ImportError:
    c_sum = None

CASES = [  # (terms, points, variables, max exponent)
    (50, 20_000, 1, 60),
    (300, 20_000, 2, 20),
    (2_000, 5_000, 2, 40),
    (500, 50_000, 3, 8),
]


def make_case(terms, points, nvar, top, rng):
    coeffs = rng.normal(size=terms) + 1j * rng.normal(size=terms)
    exps = rng.integers(0, top + 1, size=(terms, nvar)).astype(np.int64)
    pts = np.exp(1j * rng.uniform(0, 2 * np.pi, size=(points, nvar))) * rng.uniform(0.5, 1.5, nvar)
    return coeffs, exps, np.ascontiguousarray(pts)


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"active backend: {kernels.BACKEND}")
    print(f"{'terms':>6} {'points':>7} {'vars':>4} {'python s':>9} {'compiled s':>10} {'speedup':>7} {'max rel diff':>12}")
    for case in CASES:
        data = make_case(*case, rng)
        tp, (vp, _) = best_of(py_sum, data, args.repeat)
        if c_sum is None:
            print(f"{case[0]:>6} {case[1]:>7} {case[2]:>4} {tp:>9.3f} {'n/a':>10}")
            continue
        tc, (vc, _) = best_of(c_sum, data, args.repeat)
        rel = np.max(np.abs(vp - vc)) / max(np.max(np.abs(vp)), 1e-300)
        print(f"{case[0]:>6} {case[1]:>7} {case[2]:>4} {tp:>9.3f} {tc:>10.3f} {tp / tc:>7.2f} {rel:>12.1e}")


if __name__ == "__main__":
    main()
