#!/usr/bin/env python3
"""Time the numba-compiled kernels against their pure-numpy fallbacks.

The three hot kernels are the orthonormal-polynomial value table, the
derivative-stack table, and the discretized Stieltjes recurrence; everything
else in the package is small dense linear algebra.  An end-to-end row times
a full sharp-constant computation under the current dispatch (set
MARKOVSHARP_NO_NUMBA=1 and rerun to compare complete pipelines).

Usage:
    python benchmarks/bench_kernels.py [--repeat 50] [--csv PATH]
"""

import argparse
import csv
import math
import sys
import time

import numpy as np

from markovsharp import _kernels, make_weight, sharp_constant_l2


def _time(fn, repeat):
    fn()  # warm (JIT compile / cache touch)
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _problem(n, npts, seed=0):
    rng = np.random.default_rng(seed)
    diag = np.zeros(n + 1)
    offdiag = np.sqrt(np.arange(1.0, n + 1.0) / 2.0)
    x = np.sort(rng.uniform(-6.0, 6.0, npts))
    w = np.exp(-x * x)
    return diag, offdiag, x, w


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--repeat", type=int, default=50)
    parser.add_argument("--csv", default="")
    args = parser.parse_args(argv)

    rows = []
    p0 = math.pi ** -0.25
    for n, npts in ((20, 200), (40, 1000), (60, 4000)):
        diag, offdiag, x, w = _problem(n, npts)
        variants = [
            ("poly_table", lambda f: (lambda: f(diag, offdiag, p0, x)),
             _kernels.poly_table_numpy, _kernels.poly_table_numba),
            ("deriv_tables(3)", lambda f: (lambda: f(diag, offdiag, p0, x, 3)),
             _kernels.deriv_tables_numpy, _kernels.deriv_tables_numba),
            ("stieltjes", lambda f: (lambda: f(x, w, n)),
             _kernels.stieltjes_numpy, _kernels.stieltjes_numba),
        ]
        for name, bind, numpy_fn, numba_fn in variants:
            t_np = _time(bind(numpy_fn), args.repeat)
            t_nb = _time(bind(numba_fn), args.repeat) if numba_fn is not None else float("nan")
            rows.append(
                {
                    "kernel": name,
                    "n": n,
                    "points": npts,
                    "numpy_us": 1e6 * t_np,
                    "numba_us": 1e6 * t_nb,
                    "speedup": t_np / t_nb if numba_fn is not None else float("nan"),
                }
            )

    hermite = make_weight({"family": "hermite"})
    t_e2e = _time(lambda: sharp_constant_l2(hermite, 40), max(3, args.repeat // 10))
    path = "numba" if _kernels.NUMBA_ENABLED else "numpy"
    rows.append(
        {
            "kernel": f"sharp_constant_l2(hermite, 40) [{path}]",
            "n": 40,
            "points": 0,
            "numpy_us": float("nan"),
            "numba_us": float("nan"),
            "speedup": float("nan"),
        }
    )
    print(f"kernel path: {path}")
    header = f"{'kernel':38s} {'n':>4s} {'points':>7s} {'numpy (us)':>12s} {'numba (us)':>12s} {'speedup':>8s}"
    print(header)
    print("-" * len(header))
    for r in rows[:-1]:
        print(
            f"{r['kernel']:38s} {r['n']:4d} {r['points']:7d} "
            f"{r['numpy_us']:12.1f} {r['numba_us']:12.1f} {r['speedup']:8.2f}"
        )
    print(f"{rows[-1]['kernel']:38s} {'':4s} {'':7s} {1e6 * t_e2e:12.1f} (end to end)")

    if args.csv:
        with open(args.csv, "w", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(rows)
        print(f"wrote {args.csv}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
