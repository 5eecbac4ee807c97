"""Benchmark the compiled kernel core against the numpy fallback.

Run from the repository root after an editable install:

    python benchmarks/bench_kernels.py [--repeats 7]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from rs_toolkit import _kernels_py

try:
    from rs_toolkit import _ckernels
except ImportError:
    _ckernels = None


def _time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=7)
    parser.add_argument("--grid", type=int, default=4096)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    x = rng.uniform(-np.pi, np.pi, args.grid)
    a = 0.5 * np.exp(1j * x)
    q = 0.7

    workloads = {
        "theta_sum(kind=3, 40 terms)": lambda mod: mod.theta_sum(x, 0.85, 40, 3),
        "theta_sum(kind=1, 40 terms)": lambda mod: mod.theta_sum(x, 0.85, 40, 1),
        "qpoch_prod(120 factors)": lambda mod: mod.qpoch_prod(a, q, 120),
        "rs_poly_table(n=64)": lambda mod: mod.rs_poly_table(64, a, q),
    }

    print(f"grid size {args.grid}, best of {args.repeats}")
    header = f"{'workload':<32}{'numpy [ms]':>12}{'compiled [ms]':>15}{'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, call in workloads.items():
        t_py = _time(lambda: call(_kernels_py), args.repeats) * 1e3
        if _ckernels is None:
            print(f"{name:<32}{t_py:>12.3f}{'n/a':>15}{'n/a':>9}")
            continue
        ref = call(_kernels_py)
        got = call(_ckernels)
        err = float(np.max(np.abs(np.asarray(ref) - np.asarray(got))))
        if err > 1e-12:
            raise SystemExit(f"backend mismatch in {name}: {err}")
        t_c = _time(lambda: call(_ckernels), args.repeats) * 1e3
        print(f"{name:<32}{t_py:>12.3f}{t_c:>15.3f}{t_py / t_c:>8.1f}x")
    if _ckernels is None:
        print("compiled core not built; only the numpy fallback was timed")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
