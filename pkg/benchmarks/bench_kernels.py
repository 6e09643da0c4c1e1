"""Compare the compiled kernels against the pure-Python reference.

Run from the repository root:

    python3 benchmarks/bench_kernels.py

Both backends produce bit-identical results (enforced by the test
suite); this script only measures the speed difference on workloads
shaped like the ones the simulators actually dispatch.
"""

from __future__ import annotations

import math
import time

import numpy as np

from mmwlink import _kernels
from mmwlink._kernels import _py


def _time(fn, *args, repeats=5):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_chain_walk(kernel, n_slots):
    rng = np.random.default_rng(0)
    cum = np.array([[0.9999, 0.9999, 0.9999, 2.0],
                    [0.999, 0.999, 0.9995, 2.0],
                    [0.999, 0.999, 0.9995, 2.0],
                    [0.0006, 0.0013, 0.0019, 2.0]])
    uniforms = rng.random(n_slots)
    counts = np.zeros(4, dtype=np.int64)
    bins = np.zeros((n_slots // 500, 4), dtype=np.int64)
    return _time(kernel, cum, 0, uniforms, 500, counts, bins)


def bench_serve_frames(kernel, horizon):
    bins = np.zeros(int(horizon / 0.5) + 1, dtype=np.int64)
    counters = np.zeros(3, dtype=np.int64)
    return _time(kernel, 0, 0.0, horizon, 2.8e9, 3.85e9,
                 5.9499999999999996e-05, 634_800, 6_348_000, 0.5, bins,
                 counters)


def main():
    if _kernels.BACKEND != "compiled":
        print("compiled backend unavailable; nothing to compare")
        return
    from mmwlink._kernels import _core

    rows = []
    for label, py_time, c_time in (
        ("chain walk, 1e6 slots",
         bench_chain_walk(_py.chain_walk, 1_000_000),
         bench_chain_walk(_core.chain_walk, 1_000_000)),
        ("frame service, 60 s horizon",
         bench_serve_frames(_py.serve_frames, 60.0),
         bench_serve_frames(_core.serve_frames, 60.0)),
        ("frame service, 1200 s horizon",
         bench_serve_frames(_py.serve_frames, 1200.0),
         bench_serve_frames(_core.serve_frames, 1200.0)),
    ):
        rows.append((label, py_time, c_time, py_time / c_time))

    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  {'python':>10}  {'compiled':>10}  speedup")
    for label, py_time, c_time, speedup in rows:
        print(f"{label:<{width}}  {py_time * 1e3:>8.1f}ms  "
              f"{c_time * 1e3:>8.1f}ms  {speedup:>6.1f}x")


if __name__ == "__main__":
    main()
