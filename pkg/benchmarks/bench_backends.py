#!/usr/bin/env python3
"""Benchmark the numba and numpy kernel backends on the hot sampling path.

The random-pure-state scatter study is the only loop in the package with
enough iterations for interpreter overhead to matter; capacity sweeps are
scalar closed-form math and included only for scale.

Usage: python benchmarks/bench_backends.py [n_samples]
"""
import sys
import time

import numpy as np

from cvdense import _backend, _kernels
from cvdense.families import haar_quaternion


def time_call(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 20000
    print(f"generating {n} seeded quaternions ...")
    quats = np.stack([haar_quaternion(i) for i in range(n)])

    results = {}
    results["numpy"] = time_call(_kernels.scatter_pairs_numpy, quats, 30.0, 1.0)
    if "numba" in _backend.available_backends():
        t0 = time.perf_counter()
        _kernels.scatter_pairs_numba(quats[:10], 30.0, 1.0)  # trigger compilation
        compile_s = time.perf_counter() - t0
        results["numba"] = time_call(_kernels.scatter_pairs_numba, quats, 30.0, 1.0)
        print(f"numba compile/warmup: {compile_s * 1e3:8.1f} ms (cached afterwards)")
    else:
        print("numba not installed; benchmarking the numpy backend only")

    print(f"\nscatter kernel, {n} samples (best of 5):")
    for name, seconds in results.items():
        rate = n / seconds / 1e6
        print(f"  {name:6s} {seconds * 1e3:8.1f} ms   {rate:6.2f} M samples/s")
    if len(results) == 2:
        print(f"  speedup numba/numpy: {results['numpy'] / results['numba']:.2f}x")

    # context: one adaptive capacity evaluation (golden section + closed form)
    from cvdense.protocol import NoiseScenario, capacity

    sc = NoiseScenario.noiseless(tau=0.9)
    t = time_call(lambda: capacity(sc, 30.0), repeats=3)
    print(f"\none adaptive capacity evaluation: {t * 1e3:.2f} ms "
          "(pure scalar math, backend-independent)")


if __name__ == "__main__":
    main()
