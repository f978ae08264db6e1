#!/usr/bin/env python3
"""Benchmark the coloring-enumeration backends (numba @njit vs pure numpy).

The same kernel is also selectable at runtime with TETRAVERIFY_NO_NUMBA=1;
this script times both paths explicitly and checks they agree.
"""

import argparse
import time

from tetraverify.kernels import partition_counts


def time_backend(dims, backend, repeats):
    # warm-up includes any JIT compilation
    t0 = time.perf_counter()
    counts = partition_counts(dims, force_backend=backend)
    warm = time.perf_counter() - t0
    best = warm
    for _ in range(repeats):
        t0 = time.perf_counter()
        partition_counts(dims, force_backend=backend)
        best = min(best, time.perf_counter() - t0)
    return counts, warm, best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=2)
    parser.add_argument("--dims", default="2,2,1;2,2,2",
                        help="semicolon-separated lattice sizes")
    args = parser.parse_args()

    lattices = [tuple(int(x) for x in d.split(",")) for d in args.dims.split(";")]
    print(f"{'dims':>10} {'edges':>6} {'backend':>8} {'first(s)':>9} {'best(s)':>9}")
    for dims in lattices:
        results = {}
        for backend in ("numba", "numpy"):
            counts, warm, best = time_backend(dims, backend, args.repeats)
            results[backend] = counts
            print(f"{str(dims):>10} {3 * dims[0] * dims[1] * dims[2]:>6} {backend:>8} "
                  f"{warm:>9.3f} {best:>9.3f}")
        assert results["numba"].tolist() == results["numpy"].tolist(), dims
        print(f"{'':>10} counts agree: {results['numba'].tolist()}")


if __name__ == "__main__":
    main()
