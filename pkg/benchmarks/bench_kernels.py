"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--sizes 10000 100000 1000000] [--repeat 5]

Each row reports the best of ``--repeat`` runs after one warm-up call (the
warm-up absorbs numba compilation) and checks the two paths agree.
"""

import argparse
import timeit

import numpy as np

from artifact import _kernels


def _cases(n, rng):
    line_syms = rng.integers(0, 2, size=n)
    steps = np.array([1, -1])
    # a walk on a 3-vertex CSR table, as built by the Parry sampler
    offsets = np.array([0, 2, 3, 4])
    cum = np.array([0.4, 1.0, 1.0, 1.0])
    targets = np.array([1, 2, 0, 0])
    labels = np.array([0, 1, 1, 0])
    u = rng.random(n)
    return {
        "line_walk": lambda fast: _kernels.line_walk(steps, line_syms, 0, 10 * n, use_numba=fast)[0],
        "displacement": lambda fast: _kernels.displacement(steps, line_syms, use_numba=fast),
        "markov_walk": lambda fast: _kernels.markov_walk(offsets, cum, targets, labels, 0, u, use_numba=fast),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[10_000, 100_000, 1_000_000])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    print(f"numba available: {_kernels.nb is not None}; default path numba={_kernels.USE_NUMBA}")
    print(f"{'kernel':14s} {'n':>9s} {'numba ms':>10s} {'numpy ms':>10s} {'speedup':>8s}  agree")
    for n in args.sizes:
        for name, fn in _cases(n, rng).items():
            a, b = fn(True), fn(False)
            agree = np.array_equal(a, b)
            t_nb = min(timeit.repeat(lambda: fn(True), number=1, repeat=args.repeat)) * 1000
            t_np = min(timeit.repeat(lambda: fn(False), number=1, repeat=args.repeat)) * 1000
            print(f"{name:14s} {n:9d} {t_nb:10.3f} {t_np:10.3f} {t_np / t_nb:8.2f}  {agree}")


if __name__ == "__main__":
    main()
