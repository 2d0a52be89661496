#!/usr/bin/env python3
"""Check that single-series symbolization scales linearly with length.

Times the full znormalize/reduce/quantize chain on series of length n and
10n and reports the median ratio over repeated trials.
"""

import argparse
import statistics
import sys
import time

import numpy as np

from sitsax import TimeSeries, sax


def median_seconds(series, w, a, trials):
    times = []
    for _ in range(trials):
        start = time.perf_counter()
        sax(series, w=w, a=a)
        times.append(time.perf_counter() - start)
    return statistics.median(times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "-n",
        type=int,
        default=5_000,
        help="base series length; at sizes past the allocator's large-block "
        "threshold the ratio starts tracking page-fault cost, not the algorithm",
    )
    parser.add_argument("-w", type=int, default=100)
    parser.add_argument("-a", type=int, default=5)
    parser.add_argument("--trials", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    small = TimeSeries.from_values(rng.normal(size=args.n))
    large = TimeSeries.from_values(rng.normal(size=10 * args.n))
    for _ in range(3):  # warm up
        sax(small, w=args.w, a=args.a)
        sax(large, w=args.w, a=args.a)

    t_small = median_seconds(small, args.w, args.a, args.trials)
    t_large = median_seconds(large, args.w, args.a, args.trials)
    print(f"n={args.n}: median {t_small * 1e3:.4g} ms")
    print(f"n={10 * args.n}: median {t_large * 1e3:.4g} ms")
    print(f"ratio for 10x length: {t_large / t_small:.4g} (linear scaling -> ~10)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
