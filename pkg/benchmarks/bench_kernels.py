#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Run after building the extension:

    python setup_ext.py build_ext --inplace
    python benchmarks/bench_kernels.py
"""
import time

import numpy as np

from plankforge import kernels


def bench(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def make_cases(rng):
    pts = rng.random((100_000, 3)) - 0.5
    nrm = rng.normal(size=(200, 3))
    nrm /= np.linalg.norm(nrm, axis=1)[:, None]
    lows = rng.normal(size=200) * 0.2 - 0.3
    highs = lows + 0.05 + 0.2 * rng.random(200)
    mids = (lows + highs) / 2
    hw = (highs - lows) / 2
    vals = np.sort(rng.normal(size=200_000))
    ilo = rng.normal(size=64)
    ihi = ilo + rng.random(64)
    return {
        "covered_mask (1e5 pts x 200 slabs)": ("covered_mask", (pts, nrm, lows, highs)),
        "interval_counts (2e5 vals x 64)": ("interval_counts", (vals, ilo, ihi)),
        "min_slab_distance (1e5 x 200)": ("min_slab_distance", (pts, nrm, mids, hw)),
    }


def main():
    backends = kernels.available_backends()
    if "compiled" not in backends:
        print("compiled backend not built; run: python setup_ext.py build_ext --inplace")
    rng = np.random.default_rng(42)
    cases = make_cases(rng)
    print(f"{'kernel':40s} " + " ".join(f"{b:>12s}" for b in backends) + f" {'speedup':>9s}")
    for label, (name, args) in cases.items():
        times = {}
        for b in backends:
            fn = getattr(kernels.get_backend(b), name)
            times[b] = bench(fn, *args)
        row = f"{label:40s} " + " ".join(f"{times[b] * 1e3:10.2f}ms" for b in backends)
        if "compiled" in times and "python" in times:
            row += f" {times['python'] / times['compiled']:8.1f}x"
        print(row)


if __name__ == "__main__":
    main()
