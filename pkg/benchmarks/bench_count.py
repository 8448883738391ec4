#!/usr/bin/env python3
"""Benchmark: compiled counting core versus the pure numpy fallback.

Runs the hot kernels on matched workloads and prints a table with the
speedup.  The compiled extension is optional; if it is missing only the
fallback column is shown.

Usage:
    python benchmarks/bench_count.py [--quick]
"""

import argparse
import sys
import time

from circlesum import _purecount

try:
    from circlesum import _fastcount
except ImportError:
    _fastcount = None


def timed(fn, *args, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true",
                    help="smaller workloads (for CI smoke runs)")
    args = ap.parse_args()

    scale = 100 if args.quick else 1
    workloads = [
        ("count_rows(1e12)", "count_rows", (10 ** 12 // scale,)),
        ("count_brute(1e8)", "count_brute", (10 ** 8 // scale,)),
        ("count_rows_range(1..1e5)", "count_rows_range",
         (1, 10 ** 5 // scale, 1)),
        ("r2_sieve(1e7)", "r2_sieve", (10 ** 7 // scale,)),
    ]

    print(f"{'workload':<28} {'pure (s)':>10} {'compiled (s)':>13} {'speedup':>9}")
    for label, name, call_args in workloads:
        t_pure, r_pure = timed(getattr(_purecount, name), *call_args)
        if _fastcount is not None:
            t_fast, r_fast = timed(getattr(_fastcount, name), *call_args)
            same = (r_pure == r_fast) if not hasattr(r_pure, "shape") \
                else bool((r_pure == r_fast).all())
            if not same:
                print(f"MISMATCH on {label}", file=sys.stderr)
                return 1
            print(f"{label:<28} {t_pure:>10.4f} {t_fast:>13.4f} "
                  f"{t_pure / t_fast:>8.1f}x")
        else:
            print(f"{label:<28} {t_pure:>10.4f} {'(not built)':>13} {'-':>9}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
