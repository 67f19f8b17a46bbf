"""Compare the numba kernels against the pure-numpy fallback.

Times the membership sieve at a few limits and bulk rank queries on the
largest table, printing per-path throughput.  Run directly:

    python benchmarks/bench_sieve.py [--limit 10000000] [--queries 1000000]
"""

import argparse
import time

import numpy as np

from sqstar import _kernels as K


def timeit(fn, *args, repeat=1):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return out, best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--limit", type=int, default=10**7)
    ap.add_argument("--queries", type=int, default=10**6)
    args = ap.parse_args()

    print(f"numba available: {K.HAVE_NUMBA}  (selected: "
          f"{'numba' if K.USING_NUMBA else 'numpy'})")

    if K.HAVE_NUMBA:
        K.warm_up()

    for limit in (10**5, 10**6, args.limit):
        flags_np, t_np = timeit(K.member_flags_numpy, limit)
        line = f"sieve {limit:>12,}:  numpy {t_np:8.3f}s"
        if K.HAVE_NUMBA:
            flags_nb, t_nb = timeit(K.member_flags_numba, limit)
            assert np.array_equal(flags_np, flags_nb), "paths disagree"
            line += f"   numba {t_nb:8.3f}s   speedup {t_np / t_nb:6.1f}x"
        print(line)

    elements = np.flatnonzero(flags_np).astype(np.uint64)
    buckets = K.build_buckets(elements, args.limit)
    rng = np.random.Generator(np.random.PCG64(0))
    xs = rng.integers(0, args.limit, size=args.queries).astype(np.uint64)

    ranks_np, t_np = timeit(K.count_below_many_numpy, elements, xs, repeat=3)
    line = (f"rank x{args.queries:,}:  numpy {t_np:8.3f}s "
            f"({1e9 * t_np / args.queries:6.1f} ns/query)")
    if K.HAVE_NUMBA:
        ranks_nb, t_nb = timeit(K.count_below_many_numba, elements, buckets, xs,
                                repeat=3)
        assert np.array_equal(ranks_np, ranks_nb), "paths disagree"
        line += (f"   numba {t_nb:8.3f}s "
                 f"({1e9 * t_nb / args.queries:6.1f} ns/query)")
    print(line)


if __name__ == "__main__":
    main()
