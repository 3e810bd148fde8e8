#!/usr/bin/env python3
"""Compare the compiled kernels against the numpy fallbacks.

Usage: python benchmarks/kernel_bench.py [--repeat 5]

Covers the two hot paths: single cut evaluation (the oracle's inner loop)
and the exhaustive cut scans behind the ground-truth checkers.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from cutlab._kernels import _pykern
from cutlab.harness import InstanceSpec, generate

try:
    from cutlab import _core
except ImportError:
    _core = None


def bench(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _core is None:
        print("compiled kernels not built; showing numpy fallback only")

    rows = []

    g = generate(InstanceSpec("random_gnp", 256, 0, (("p", 0.5),)))
    mask = np.zeros(g.n, dtype=np.uint8)
    mask[::3] = 1
    calls = 2000

    def cut_eval(impl):
        def run():
            total = 0
            for _ in range(calls):
                total += impl.cut_value(g._indptr, g._indices, g._weights, mask)
            return total

        return run

    small = generate(InstanceSpec("random_gnp", 18, 1, (("p", 0.4),)))
    eu, ev, ew = small.edge_arrays()
    r_mask = 0b100101

    jobs = [
        (f"cut_value x{calls} (n=256)", cut_eval),
        ("min_cut_scan n=18", lambda impl: (lambda: impl.min_cut_scan(small.n, eu, ev, ew))),
        (
            "separation_scan n=18",
            lambda impl: (lambda: impl.separation_violation(small.n, eu, ev, ew, r_mask, 2)),
        ),
        (
            "conductance n=18",
            lambda impl: (lambda: impl.best_conductance_cut(small.n, eu, ev, ew)),
        ),
    ]

    header = f"{'kernel':28s} {'numpy':>10s} {'compiled':>10s} {'speedup':>8s}"
    print(header)
    print("-" * len(header))

    for name, make in jobs:
        t_py, out_py = bench(make(_pykern), args.repeat)
        if _core is not None:
            t_c, out_c = bench(make(_core), args.repeat)
            assert out_py == out_c, f"{name}: implementations disagree"
            print(f"{name:28s} {t_py*1e3:9.2f}ms {t_c*1e3:9.2f}ms {t_py/max(t_c,1e-9):7.1f}x")
        else:
            print(f"{name:28s} {t_py*1e3:9.2f}ms {'-':>10s} {'-':>8s}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
