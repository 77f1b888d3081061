"""Compare the numba-jitted kernels against the pure-numpy fallbacks.

Usage: python3 benchmarks/bench_kernels.py [--size N] [--repeats R]
"""
import argparse
import timeit

import numpy as np

from wignerflow import kernels


def bench(label, func, *args, repeats=5):
    func(*args)  # warm-up (includes JIT compilation)
    best = min(timeit.repeat(lambda: func(*args), number=1, repeat=repeats))
    print(f"{label:34s} {best * 1e3:9.3f} ms")
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=1024)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    n = args.size

    rng = np.random.default_rng(0)
    values = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    phase = np.exp(1j * rng.standard_normal((n, n)))
    x = rng.uniform(-10, 10, (n, n))
    p = rng.uniform(-10, 10, (n, n))
    gauss_args = (x, p, 1.0, 0.0, 1.0, 1.0, 1.0 / np.pi)

    print(f"lattice {n} x {n}, best of {args.repeats} "
          f"(numba {'enabled' if kernels.USE_NUMBA else 'DISABLED'})\n")
    t_np = bench("apply_phase  numpy", kernels.apply_phase_numpy,
                 values.copy(), phase, repeats=args.repeats)
    if kernels.USE_NUMBA:
        t_nb = bench("apply_phase  numba", kernels.apply_phase,
                     values.copy(), phase, repeats=args.repeats)
        print(f"{'':34s} speedup {t_np / t_nb:5.2f}x\n")
    t_np = bench("gaussian_field  numpy", kernels.gaussian_field_numpy,
                 *gauss_args, repeats=args.repeats)
    if kernels.USE_NUMBA:
        t_nb = bench("gaussian_field  numba", kernels.gaussian_field,
                     *gauss_args, repeats=args.repeats)
        print(f"{'':34s} speedup {t_np / t_nb:5.2f}x")
    if not kernels.USE_NUMBA:
        print("\nset WIGNERFLOW_NO_NUMBA=0 (or unset it) to benchmark the "
              "jitted path")


if __name__ == "__main__":
    main()
