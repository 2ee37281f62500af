"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--hi 200000] [--repeat 3]
"""
import argparse
import time

import numpy as np

from collatz_phase import kernels
from collatz_phase.phase import CLASSIC


def _best(fn, repeat):
    out = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        out.append(time.perf_counter() - t0)
    return min(out)


def cases(hi):
    p = CLASSIC.kernel_params()
    ea = (p["mult"], p["add"], p["k"], p["logk"], p["logbase"], p["alpha"], p["branch_from"])
    depths = np.array([10, 100, 1000], dtype=np.int64)
    xs = np.arange(100, 100 + hi // 10, dtype=np.uint64)
    return {
        "eps_block": lambda m: m.eps_block(1, hi, *ea, 500, 1e-3),
        "orbit_block": lambda m: m.orbit_block(1, hi // 10, 100_000, *ea, False, depths),
        "stop_times": lambda m: m.stop_times(1, hi, 100_000),
        "scan_cell": lambda m: m.scan_cell(xs, np.log(6.0), 0.2, -1.0),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--hi", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if kernels.compiled is None:
        print("compiled extension not built; only the fallback can be timed")
    print(f"{'kernel':<12} {'compiled s':>11} {'python s':>10} {'speedup':>8}")
    for name, fn in cases(args.hi).items():
        tp = _best(lambda: fn(kernels.pure), args.repeat)
        if kernels.compiled is None:
            print(f"{name:<12} {'-':>11} {tp:10.3f} {'-':>8}")
            continue
        tc = _best(lambda: fn(kernels.compiled), args.repeat)
        print(f"{name:<12} {tc:11.4f} {tp:10.3f} {tp / tc:7.0f}x")


if __name__ == "__main__":
    main()
