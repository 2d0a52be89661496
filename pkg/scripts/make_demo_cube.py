#!/usr/bin/env python3
"""Synthesize an NDVI cube file with seasonal per-pixel dynamics.

Each pixel follows its own sinusoidal annual cycle (random base level,
amplitude, and phase) with additive noise, clipped to the valid NDVI range.
Deterministic for a given seed, so re-running reproduces the file bit for
bit. Defaults produce a multi-year stack at the usual 16-day cadence.
"""

import argparse
import datetime as dt
import sys
import time

import numpy as np

from sitsax import RasterCube, days_since_epoch
from sitsax.cubefile import write_cube

CADENCE_DAYS = 16
PERIOD_STEPS = 23  # one year at 16-day cadence


def synthesize(width, height, bands, seed):
    rng = np.random.default_rng(seed)
    base = rng.uniform(0.05, 0.45, size=(height, width))
    amplitude = rng.uniform(0.05, 0.35, size=(height, width))
    phase = rng.uniform(0.0, 2.0 * np.pi, size=(height, width))
    t = np.arange(bands, dtype=np.float64)[:, None, None]
    values = base + amplitude * np.sin(2.0 * np.pi * t / PERIOD_STEPS + phase)
    values += rng.normal(0.0, 0.03, size=(bands, height, width))
    np.clip(values, -1.0, 1.0, out=values)
    start = days_since_epoch(dt.date(2000, 2, 18))
    dates = start + CADENCE_DAYS * np.arange(bands, dtype=np.int64)
    return RasterCube(
        width=width,
        height=height,
        band_dates=dates,
        data=values,
        missing=np.zeros(values.shape, dtype=bool),
    )


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--width", type=int, default=521)
    parser.add_argument("--height", type=int, default=455)
    parser.add_argument("--bands", type=int, default=135)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--out", required=True)
    args = parser.parse_args(argv)

    start = time.perf_counter()
    cube = synthesize(args.width, args.height, args.bands, args.seed)
    write_cube(cube, args.out)
    elapsed = time.perf_counter() - start
    print(
        f"wrote {args.width}x{args.height}x{args.bands} cube "
        f"({args.width * args.height} pixels) to {args.out} in {elapsed:.3g} s"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
