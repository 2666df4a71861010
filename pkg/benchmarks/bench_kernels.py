"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Both backends run on identical inputs; the maximum absolute difference of
their outputs is printed next to the timings.
"""
import argparse
import math
import time

import numpy as np

from swkb._backend import compiled_kernels, python_kernels
from swkb.catalog import coulomb_radial, square_well
from swkb.oracle import default_grid, tridiagonal


def _best(fn, repeat):
    best = math.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _eigen_case(entry, n_levels=5):
    grid = default_grid(entry, n_levels)
    diag, off2 = tridiagonal(entry, grid)
    off = math.sqrt(off2[0])
    lo, hi = float(diag.min()) - 2 * off, float(diag.max()) + 2 * off
    args = (diag, off2, n_levels, lo, hi, 2 * np.finfo(float).eps, 1e-15 * max(abs(lo), abs(hi)))
    return f"lowest_eigenvalues {entry.name} N={grid.points}", args


def _trace_case(samples=3500, sigma=0.05):
    e = square_well()
    E = np.linspace(0.5, 35.0, samples)
    F = e.counting_F(E)
    frac = np.ascontiguousarray(F - np.floor(F))
    damp = np.ascontiguousarray(2 * math.pi * sigma * e.counting_F_prime(E))
    return f"oscillating_sum square-well samples={samples}", (frac, damp, 10_000, 1e-20)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if compiled_kernels is None:
        raise SystemExit("compiled extension not built; run `pip install --no-build-isolation -e .`")

    cases = [
        (_eigen_case(square_well()), "lowest_eigenvalues"),
        (_eigen_case(coulomb_radial()), "lowest_eigenvalues"),
        (_trace_case(), "oscillating_sum"),
    ]
    print(f"{'kernel':<52}{'compiled [s]':>14}{'python [s]':>14}{'speedup':>10}{'max |diff|':>12}")
    for (label, fargs), name in cases:
        tc, rc = _best(lambda: getattr(compiled_kernels, name)(*fargs), args.repeat)
        tp, rp = _best(lambda: getattr(python_kernels, name)(*fargs), args.repeat)
        diff = float(np.max(np.abs(np.asarray(rc) - np.asarray(rp))))
        print(f"{label:<52}{tc:>14.4f}{tp:>14.4f}{tp / tc:>10.1f}{diff:>12.2e}")


if __name__ == "__main__":
    main()
