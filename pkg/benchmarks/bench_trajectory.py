"""Time the jitted and numpy trajectory kernels on the same inputs.

    python3 benchmarks/bench_trajectory.py [--K 20000] [--repeat 3]
"""

import argparse
import time

import numpy as np

from hedge_nash import _kernels
from hedge_nash.generators import GeneratorSpec, generate


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--K", type=int, default=20_000)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--sizes", type=int, nargs="+", default=[3, 10, 50])
    p.add_argument("--stride", type=int, default=1)
    args = p.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; only the numpy path is available")

    print(f"K={args.K} stride={args.stride} best of {args.repeat}")
    print(f"{'n':>4} {'numba [s]':>10} {'numpy [s]':>10} {'speedup':>8} {'max |diff|':>11}")
    for n in args.sizes:
        c = generate(GeneratorSpec("random_uniform", n, 0)).payoffs
        c = np.ascontiguousarray(c)
        log_x0 = np.full(n, -np.log(n))
        run = lambda jit: _kernels.run_kernel(c, log_x0, 0.1, args.K, args.stride, use_jit=jit)
        run(True)  # compile
        t_jit = best_of(lambda: run(True), args.repeat)
        t_np = best_of(lambda: run(False), args.repeat)
        diff = max(float(np.abs(a - b).max()) for a, b in zip(run(True), run(False)))
        print(f"{n:>4} {t_jit:>10.4f} {t_np:>10.4f} {t_np / t_jit:>7.1f}x {diff:>11.2e}")


if __name__ == "__main__":
    main()
