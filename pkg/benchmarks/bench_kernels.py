#!/usr/bin/env python3
"""Benchmark the hot array kernels: numba-jitted loops vs pure numpy.

Runs both implementations regardless of the GREENPOLES_NUMBA flag and prints
a timing table. The workloads mirror the package's real hot paths: batched
disc products for circle quadrature and polynomial boundary sampling for
disc certification.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from greenpoles import _kernels


def _workloads(rng):
    poles = (0.7 * np.sqrt(rng.uniform(size=6))
             * np.exp(2j * np.pi * rng.uniform(size=6)))
    weights = np.sort(rng.uniform(0.2, 3.0, size=6))[::-1].copy()
    zs = (0.85 * np.sqrt(rng.uniform(size=4096))
          * np.exp(2j * np.pi * rng.uniform(size=4096)))
    rest = rng.uniform(0.0, 0.8, size=4096)
    coeffs = (rng.normal(size=(4, 9)) + 1j * rng.normal(size=(4, 9))) * 0.1
    lams = np.exp(2j * np.pi * np.arange(4096) / 4096)
    return [
        ("mobius_distance_many", (poles[0], zs)),
        ("disc_log_products", (poles, weights, zs)),
        ("collinear_log_green", (poles, weights, zs, rest)),
        ("poly_eval_many", (coeffs, lams)),
    ]


def _time(fn, args, repeat):
    fn(*args)  # warm up (jit compilation, cache effects)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=7)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    workloads = _workloads(rng)

    impls = [("numpy", _kernels.numpy_impl)]
    if _kernels.numba_impl is not None:
        impls.append(("numba", _kernels.numba_impl))
    else:
        print("numba unavailable; timing the numpy path only")

    print(f"active implementation: {_kernels.IMPL}")
    print(f"{'kernel':<24}" + "".join(f"{name:>12}" for name, _ in impls) + f"{'speedup':>10}")
    for name, wargs in workloads:
        times = []
        for _, impl in impls:
            cast = tuple(
                np.asarray(a, dtype=np.complex128) if np.asarray(a).dtype.kind == "c"
                else (np.asarray(a, dtype=np.float64) if isinstance(a, np.ndarray) else a)
                for a in wargs
            )
            times.append(_time(getattr(impl, name), cast, args.repeat))
        line = f"{name:<24}" + "".join(f"{t * 1e6:>10.1f}us" for t in times)
        if len(times) == 2 and times[1] > 0:
            line += f"{times[0] / times[1]:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
