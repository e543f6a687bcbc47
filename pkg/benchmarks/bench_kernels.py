"""Times the compiled kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--samples N] [--grid M] [--repeat R]
"""

import argparse
import timeit

import numpy as np

from lowdepth_gsee import kernels


def cases(n, m):
    rng = np.random.default_rng(0)
    t = rng.uniform(-40, 40, n)
    z_re, z_im = rng.standard_normal(n), rng.standard_normal(n)
    xs = np.linspace(0.29, 0.31, m)
    E, P = np.array([0.3, 0.4, 0.55]), np.array([0.6, 0.25, 0.15])
    return {
        "conv_sums": lambda: kernels.conv_sums(t, z_re, z_im, xs),
        "conv_sums_grid": lambda: kernels.conv_sums_grid(t, z_re, z_im, 0.29, 0.02 / m, m),
        "signal_batch": lambda: kernels.signal_batch(t, E, P),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=200_000)
    ap.add_argument("--grid", type=int, default=11)
    ap.add_argument("--repeat", type=int, default=5)
    a = ap.parse_args()

    names = sorted(kernels.BACKENDS)
    if "compiled" not in names:
        print("compiled extension not built; timing the numpy kernels only")
    print(f"samples={a.samples} grid={a.grid} best of {a.repeat}")
    print(f"{'kernel':<16}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) == 2 else ""))
    for kernel in cases(a.samples, a.grid):
        best = {}
        for name in names:
            kernels.use(name)
            fn = cases(a.samples, a.grid)[kernel]
            fn()  # warm up
            best[name] = min(timeit.repeat(fn, number=1, repeat=a.repeat))
        line = f"{kernel:<16}" + "".join(f"{best[n] * 1e3:>10.2f}ms" for n in names)
        if len(names) == 2:
            line += f"{best['python'] / best['compiled']:>11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
