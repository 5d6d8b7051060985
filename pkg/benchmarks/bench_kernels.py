"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Prints best-of-N wall times and the speed-up per kernel. Outputs are also
compared so a silent divergence shows up here as well as in the tests.
"""

import argparse
import sys
import timeit

import numpy as np

from curvsel import _fallback

try:
    from curvsel import _kernels
except ImportError:
    sys.exit("compiled kernels not built; run `pip install -e . --no-build-isolation` first")


def cases(rng):
    m = 200_000
    x, y = rng.uniform(size=m), rng.integers(0, 6, size=m) / 5.0
    P = rng.uniform(-10, 10, size=(6, m))
    X = rng.normal(size=(2000, 20))
    labels = rng.integers(0, 3, size=2000)
    order = np.argsort(X, axis=0, kind="stable")
    return {
        "triple_curvatures (200k)": lambda k: k.triple_curvatures(*P),
        "plane_curvatures (200k)": lambda k: k.plane_curvatures(x, y),
        "mean_plane_curvature (200k)": lambda k: k.mean_plane_curvature(x, y),
        "best_gini_split (2000x20)": lambda k: k.best_gini_split(X, labels, 3, order),
    }


def same(a, b):
    if isinstance(a, tuple):
        return all(same(u, v) for u, v in zip(a, b))
    return np.allclose(a, b, rtol=1e-12, atol=0)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    print(f"{'kernel':32s} {'cython ms':>10s} {'numpy ms':>10s} {'speed-up':>9s}  agree")
    for name, fn in cases(rng).items():
        agree = same(fn(_kernels), fn(_fallback))
        fast = min(timeit.repeat(lambda: fn(_kernels), number=1, repeat=args.repeat))
        slow = min(timeit.repeat(lambda: fn(_fallback), number=1, repeat=args.repeat))
        print(f"{name:32s} {1e3 * fast:10.2f} {1e3 * slow:10.2f} {slow / fast:8.1f}x  {agree}")


if __name__ == "__main__":
    main()
