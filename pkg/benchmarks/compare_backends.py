#!/usr/bin/env python3
"""Benchmark the compiled core against the pure-numpy fallback.

Times the two hot line kernels and a full bilateral-filter run under each
available backend and prints a comparison table.

    python benchmarks/compare_backends.py --size 512 --repeats 5
"""

import argparse
import time

import numpy as np

from shiftbf import _core
from shiftbf.bilateral import FilterParams, shiftable_bf
from shiftbf.image import checkerboard
from shiftbf.maxfilter import compute_T
from shiftbf.spatial import Box, box_filter


def best_of(repeats, fn, *args):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best * 1e3


def run(size, radius, repeats):
    rng = np.random.default_rng(0)
    img = rng.uniform(0, 255, (size, size))
    checker = checkerboard(size, size, max(8, size // 8))
    params = FilterParams(sigma_s=8, sigma_r=20, epsilon=0.01, spatial=Box(8))

    cases = [
        (f"running max lines (R={radius})",
         lambda: _core.running_max_lines(img, radius)),
        (f"window sum lines (R={radius})",
         lambda: _core.window_sum_lines(img, radius)),
        (f"box filter {size}^2 (R={radius})",
         lambda: box_filter(img, radius)),
        (f"compute_T {size}^2 (R={radius})",
         lambda: compute_T(img, radius)),
        (f"shiftable bf {size}^2 (sigma_r=20, eps=0.01)",
         lambda: shiftable_bf(checker, params)),
    ]

    backends = _core.available_backends()
    results = {}
    for name in backends:
        previous = _core.use_backend(name)
        try:
            for label, fn in cases:
                fn()  # warm-up
                results[(label, name)] = best_of(repeats, fn)
        finally:
            _core.use_backend(previous)

    width = max(len(label) for label, _ in cases)
    header = f"{'case':<{width}}  " + "  ".join(f"{b:>12}" for b in backends)
    if len(backends) > 1:
        header += "  speedup"
    print(header)
    print("-" * len(header))
    for label, _ in cases:
        row = f"{label:<{width}}  "
        row += "  ".join(f"{results[(label, b)]:>9.2f} ms" for b in backends)
        if len(backends) > 1:
            ratio = results[(label, "python")] / results[(label, "compiled")]
            row += f"  {ratio:6.2f}x"
        print(row)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--size", type=int, default=512)
    parser.add_argument("--radius", type=int, default=15)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    print(f"backends available: {', '.join(_core.available_backends())}")
    run(args.size, args.radius, args.repeats)


if __name__ == "__main__":
    main()
