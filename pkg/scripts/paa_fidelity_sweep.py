#!/usr/bin/env python3
"""Sweep word length against reconstruction error for sampled cube pixels.

Quantifies the concision/fidelity trade-off: fewer frames mean shorter
words but larger round-trip error. Emits CSV rows ``w,mean_error`` for the
z-normalized series of randomly sampled pixels.
"""

import argparse
import sys

import numpy as np

from sitsax import pixel_series, reconstruction_error, znormalize
from sitsax.cubefile import read_cube


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--input", required=True, help="cube file")
    parser.add_argument("--pixels", type=int, default=200, help="sample size")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--word-lengths",
        default="1,2,3,5,9,15,27,45,135",
        help="comma-separated w values (values above the band count are skipped)",
    )
    args = parser.parse_args(argv)

    cube = read_cube(args.input)
    rng = np.random.default_rng(args.seed)
    xs = rng.integers(0, cube.width, size=args.pixels)
    ys = rng.integers(0, cube.height, size=args.pixels)
    sampled = [znormalize(pixel_series(cube, int(x), int(y))).values for x, y in zip(xs, ys)]

    print("w,mean_error")
    for w in (int(v) for v in args.word_lengths.split(",")):
        if not 1 <= w <= cube.bands:
            continue
        errors = [reconstruction_error(values, w) for values in sampled]
        print(f"{w},{np.mean(errors):.6g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
