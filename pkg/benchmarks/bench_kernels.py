"""Benchmark the compiled stepping kernels against the pure-python fallback.

Times ``rk4_steps`` (per-substep generator stepping) and ``volterra_profile``
(O(n^2) memory convolution) on representative problem sizes and prints a
speedup table.  Run from the repository root:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --repeats 9 --sizes 2000 8000
"""

import argparse
import importlib
import time

import numpy as np

from dynamap._kernels import _fallback


def load_backends():
    backends = {"python": _fallback}
    try:
        backends["compiled"] = importlib.import_module("dynamap._kernels._core")
    except ImportError:
        pass
    return backends


def best_of(repeats, fn, *args):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def rk4_problem(n_substeps, dim=2, seed=0):
    """Substep arrays for a decaying generator on a dim-level system."""
    rng = np.random.default_rng(seed)
    n = dim * dim
    base = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    base = 0.1 * (base - base.conj().T)  # mild, norm-bounded drift
    gs = np.empty((n_substeps, 5, n, n), dtype=complex)
    h = 1e-3
    for i in range(n_substeps):
        for q, frac in enumerate((0.0, 0.25, 0.5, 0.75, 1.0)):
            t = (i + frac) * h
            gs[i, q] = np.exp(-t) * base
    hs = np.full(n_substeps, h)
    return gs, hs, np.eye(n, dtype=complex)


def bench_rk4(backends, n_substeps, repeats):
    gs, hs, y0 = rk4_problem(n_substeps)
    rows = {}
    reference = None
    for name, impl in backends.items():
        elapsed, (y, _) = best_of(repeats, impl.rk4_steps, gs, hs, y0)
        rows[name] = elapsed
        if reference is None:
            reference = y
        else:
            assert np.max(np.abs(y - reference)) <= 1e-12
    return rows


def bench_volterra(backends, n_points, repeats):
    tgrid = np.linspace(0.0, 2 * np.pi, n_points)
    kvals = 1.0 + 0.3 * np.cos(tgrid)
    h = tgrid[1] - tgrid[0]
    rows = {}
    reference = None
    for name, impl in backends.items():
        elapsed, (a, _) = best_of(repeats, impl.volterra_profile, kvals, h)
        rows[name] = elapsed
        if reference is None:
            reference = a
        else:
            assert np.max(np.abs(a - reference)) <= 1e-12
    return rows


def print_table(title, results):
    print(f"\n{title}")
    print(f"  {'size':>8}  {'python':>12}  {'compiled':>12}  {'speedup':>8}")
    for size, rows in results:
        py = rows["python"]
        if "compiled" in rows:
            comp = rows["compiled"]
            print(f"  {size:>8}  {py:>10.4f} s  {comp:>10.4f} s  {py / comp:>7.1f}x")
        else:
            print(f"  {size:>8}  {py:>10.4f} s  {'n/a':>12}  {'n/a':>8}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5,
                        help="timing repeats, best-of (default 5)")
    parser.add_argument("--sizes", type=int, nargs="+",
                        default=[1000, 4000, 16000],
                        help="problem sizes: RK4 substeps / Volterra grid points")
    args = parser.parse_args()

    backends = load_backends()
    names = ", ".join(sorted(backends))
    print(f"backends under test: {names}")
    if "compiled" not in backends:
        print("compiled extension not built; timing the fallback only")

    rk4_results = [
        (n, bench_rk4(backends, n, args.repeats)) for n in args.sizes
    ]
    volterra_results = [
        (n, bench_volterra(backends, n, args.repeats)) for n in args.sizes
    ]
    print_table("rk4_steps (substeps of a 4x4 superoperator)", rk4_results)
    print_table("volterra_profile (uniform grid points)", volterra_results)


if __name__ == "__main__":
    main()
