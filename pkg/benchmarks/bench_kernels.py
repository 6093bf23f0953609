"""Benchmark the compiled label kernels against the pure-numpy fallback.

Times the two hot kernels on synthetic inputs and one end-to-end exact
solve per backend (the fallback solve runs in a subprocess with
SCENAGG_PURE_PYTHON=1 so the import-time backend selection is exercised for
real). Outputs match between backends by construction; this script asserts
it anyway.

Run:  python benchmarks/bench_kernels.py
"""

import os
import subprocess
import sys
import time

import numpy as np

from scenagg import _labelops_py

try:
    from scenagg import _labelops
except ImportError:
    _labelops = None


def timeit(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def bench_pareto():
    print("pareto_keep: nondominated filtering of a label set")
    print(f"{'labels':>8} {'K':>4} {'python':>10} {'cython':>10} {'speedup':>8}")
    rng = np.random.default_rng(0)
    for m in (1_000, 5_000, 20_000):
        for k in (4, 8, 16):
            vals = np.ascontiguousarray(rng.random((m, k)).cumsum(axis=0))
            t_py, mask_py = timeit(lambda: _labelops_py.pareto_keep(vals))
            if _labelops is None:
                print(f"{m:>8} {k:>4} {t_py * 1e3:>9.1f}ms {'-':>10}")
                continue
            t_cy, mask_cy = timeit(lambda: _labelops.pareto_keep(vals))
            assert np.array_equal(mask_py, mask_cy)
            print(f"{m:>8} {k:>4} {t_py * 1e3:>9.1f}ms {t_cy * 1e3:>9.1f}ms "
                  f"{t_py / t_cy:>7.1f}x")


def bench_pairing():
    print("\nmin_pairing: exact subset-DP matching")
    print(f"{'points':>8} {'python':>10} {'cython':>10} {'speedup':>8}")
    rng = np.random.default_rng(1)
    for m in (10, 14, 16):
        pts = rng.random((m, 32))
        diff = pts[:, None] - pts[None, :]
        dist = np.ascontiguousarray(np.sqrt((diff**2).sum(-1)))
        t_py, p_py = timeit(lambda: _labelops_py.min_pairing(dist))
        if _labelops is None:
            print(f"{m:>8} {t_py * 1e3:>9.1f}ms {'-':>10}")
            continue
        t_cy, p_cy = timeit(lambda: _labelops.min_pairing(dist))
        assert np.array_equal(p_py, p_cy)
        print(f"{m:>8} {t_py * 1e3:>9.1f}ms {t_cy * 1e3:>9.1f}ms "
              f"{t_py / t_cy:>7.1f}x")


SOLVE_SNIPPET = """
import time
import scenagg as sa
inst = sa.gen_layered(10, 4, 16, seed=7)
start = time.perf_counter()
res = sa.exact_minmax(inst)
print(f"{sa.KERNEL_BACKEND} {time.perf_counter() - start:.3f} {res.value!r}")
"""


def bench_end_to_end():
    print("\nexact min-max solve, 10 layers x width 4, 16 scenarios")
    results = {}
    for env_extra in ({}, {"SCENAGG_PURE_PYTHON": "1"}):
        out = subprocess.run(
            [sys.executable, "-c", SOLVE_SNIPPET],
            env={**os.environ, **env_extra},
            capture_output=True, text=True, check=True)
        backend, seconds, value = out.stdout.split()
        results[backend] = (float(seconds), value)
        print(f"  {backend:<8} {float(seconds):.3f}s  (value {value})")
    if len(results) == 2:
        assert results["python"][1] == results["cython"][1]
        print(f"  speedup {results['python'][0] / results['cython'][0]:.1f}x")


if __name__ == "__main__":
    if _labelops is None:
        print("note: compiled extension not available, timing fallback only\n")
    bench_pareto()
    bench_pairing()
    bench_end_to_end()
