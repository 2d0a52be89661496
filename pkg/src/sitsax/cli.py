"""Command-line driver: ingest -> ndvi -> symbolize -> stats/query -> export.

Numeric values printed to the terminal use 6 significant digits; files carry
full precision. Every output file is written atomically (temp file plus
rename), so a crashed run never leaves a partial artifact behind.
"""

import argparse
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import __version__
from .cube import (
    FillPolicy,
    RasterCube,
    compute_ndvi,
    ingest,
    query_mindist,
    symbolize_cube,
    word_histogram,
)
from .cubefile import (
    MAGIC,
    atomic_write_bytes,
    read_band,
    read_cube,
    read_manifest,
    read_pair_manifest,
    read_probe,
    read_raster,
    write_cube,
    write_raster,
)
from .errors import AlphabetError, CubeFormatError, SitsaxError, ValidationError
from .series import DEFAULT_EPSILON_STD, TimeSeries

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_FORMAT = 4
EXIT_INVARIANT = 5

_EXIT_CODE_DOC = """\
exit codes:
  0  success
  1  unexpected internal error
  2  usage error (unknown flag or subcommand, missing required flag)
  3  input file missing or unreadable
  4  input file does not parse (cube/raster/manifest/probe format)
  5  domain invariant violated (word length vs bands, alphabet size,
     incompatible probe, out-of-range values, ...)
"""


@dataclass(frozen=True)
class RunConfig:
    """Validated symbolization knobs shared by the symbolize/query commands."""

    input_path: str
    word_length: int
    alphabet_size: int
    epsilon_std: float = DEFAULT_EPSILON_STD
    fill: FillPolicy = FillPolicy.REJECT
    workers: int = 1

    def __post_init__(self):
        if not self.input_path:
            raise ValidationError("input path must be non-empty")
        if self.word_length < 1:
            raise ValidationError("word length must be at least 1")
        if not 2 <= self.alphabet_size <= 26:
            raise AlphabetError(f"alphabet size must be in [2, 26], got {self.alphabet_size}")
        if self.workers < 1:
            raise ValidationError("worker count must be at least 1")

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        return cls(
            input_path=args.input,
            word_length=args.word_length,
            alphabet_size=args.alphabet_size,
            epsilon_std=args.epsilon_std,
            fill=FillPolicy(args.fill),
            workers=args.workers,
        )


def _symbolize_with(config: RunConfig, cube):
    return symbolize_cube(
        cube,
        w=config.word_length,
        a=config.alphabet_size,
        epsilon_std=config.epsilon_std,
        fill=config.fill,
        workers=config.workers,
    )


def _fmt(value: float) -> str:
    return format(float(value), ".6g")


def _full(value: float) -> str:
    return repr(float(value))


def _emit(path, text: str) -> None:
    """Write text to a file atomically, or to stdout when no path is given."""
    if path:
        atomic_write_bytes(path, text.encode("ascii"))
    else:
        sys.stdout.write(text)


def _add_band_decode_flags(parser):
    parser.add_argument("--scale", type=float, default=1.0, help="multiplier applied to raw samples (MODIS scaled-int16 uses 0.0001)")
    parser.add_argument("--offset", type=float, default=0.0, help="offset added after scaling")
    parser.add_argument("--missing", type=float, default=float("nan"), help="raw sentinel marking missing samples (default NaN)")
    parser.add_argument("--width", type=int, default=None, help="band width in pixels (flat binary bands only)")
    parser.add_argument("--height", type=int, default=None, help="band height in pixels (flat binary bands only)")
    parser.add_argument("--dtype", choices=["int16", "float64"], default="float64", help="sample type of flat binary bands")


def _add_sax_flags(parser):
    parser.add_argument("-w", "--word-length", type=int, dest="word_length", help="frames per word")
    parser.add_argument("-a", "--alphabet-size", type=int, dest="alphabet_size", help="letters in the alphabet (2..26)")
    parser.add_argument("--epsilon-std", type=float, default=DEFAULT_EPSILON_STD, help="std threshold below which a pixel is treated as constant")
    parser.add_argument("--fill", choices=["reject", "interp"], default="reject", help="missing-sample policy (default reject)")
    parser.add_argument("--workers", type=int, default=os.cpu_count() or 1, help="parallel workers (default: machine parallelism)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sitsax",
        description="Symbolize satellite NDVI image time series and query them.",
        epilog=_EXIT_CODE_DOC,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"sitsax {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="stack dated NDVI band files into a cube file")
    p.add_argument("--manifest", required=True, help="text file with one 'path,ISO-date' line per band")
    p.add_argument("--out", required=True, help="cube file to write")
    _add_band_decode_flags(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("ndvi", help="derive an NDVI cube from dated NIR/red reflectance pairs")
    p.add_argument("--manifest", required=True, help="text file with one 'nir,red,ISO-date' line per date")
    p.add_argument("--out", required=True, help="cube file to write")
    _add_band_decode_flags(p)
    p.set_defaults(func=cmd_ndvi)

    p = sub.add_parser("symbolize", help="convert a cube into one word per pixel")
    p.add_argument("--input", required=True, help="cube file")
    p.add_argument("--out", required=True, help="symbolic raster file to write")
    _add_sax_flags(p)
    p.set_defaults(func=cmd_symbolize)

    p = sub.add_parser("stats", help="word histogram of a symbolic raster (CSV: word,count)")
    p.add_argument("--input", required=True, help="symbolic raster file")
    p.add_argument("--out", help="output CSV (default: stdout)")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("query", help="pixels whose word lies within a radius of a probe series")
    p.add_argument("--input", required=True, help="cube file or symbolic raster file")
    p.add_argument("--probe", required=True, help="probe CSV, one value per line")
    p.add_argument("--radius", type=float, required=True, help="distance threshold ('inf' allowed)")
    p.add_argument("--out", help="output CSV x,y,mindist (default: stdout)")
    _add_sax_flags(p)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("export", help="dump one cube band as a CSV grid")
    p.add_argument("--input", required=True, help="cube file")
    p.add_argument("--band", type=int, required=True, help="0-based band index")
    p.add_argument("--out", required=True, help="output CSV")
    p.set_defaults(func=cmd_export)

    return parser


def _decode_raw_band(path, args):
    raw = read_band(path, width=args.width, height=args.height, dtype=args.dtype)
    if np.isnan(args.missing):
        missing = np.isnan(raw)
    else:
        missing = raw == args.missing
    values = raw * args.scale + args.offset
    return values, missing


def cmd_ingest(args) -> int:
    entries = read_manifest(args.manifest)
    cube = ingest(
        [(path, day) for path, day in entries],
        scale=args.scale,
        offset=args.offset,
        missing_value=args.missing,
        width=args.width,
        height=args.height,
        dtype=args.dtype,
    )
    write_cube(cube, args.out)
    print(f"ingested {cube.bands} bands into {cube.width}x{cube.height} cube -> {args.out}")
    return EXIT_OK


def cmd_ndvi(args) -> int:
    entries = read_pair_manifest(args.manifest)
    entries.sort(key=lambda e: e[2])
    days = [day for _, _, day in entries]
    for prev, cur in zip(days, days[1:]):
        if cur == prev:
            raise ValidationError(f"duplicate acquisition date (day {cur})")
    layers, masks = [], []
    for nir_path, red_path, _ in entries:
        nir, nir_missing = _decode_raw_band(nir_path, args)
        red, red_missing = _decode_raw_band(red_path, args)
        band, missing = compute_ndvi(nir, red, missing=nir_missing | red_missing)
        layers.append(band)
        masks.append(missing)
    data = np.stack(layers)
    cube = RasterCube(
        width=data.shape[2],
        height=data.shape[1],
        band_dates=np.asarray(days, dtype=np.int64),
        data=data,
        missing=np.stack(masks),
    )
    write_cube(cube, args.out)
    masked = int(cube.missing.sum())
    print(f"derived {cube.bands} NDVI bands ({masked} masked samples) -> {args.out}")
    return EXIT_OK


class _UsageError(Exception):
    pass


def _require(args, parser_hint: str, *names) -> None:
    gaps = [flag for flag, name in names if getattr(args, name) is None]
    if gaps:
        raise _UsageError(f"{parser_hint} requires {', '.join(gaps)}")


def cmd_symbolize(args) -> int:
    _require(args, "symbolize", ("-w/--word-length", "word_length"), ("-a/--alphabet-size", "alphabet_size"))
    config = RunConfig.from_args(args)
    cube = read_cube(config.input_path)
    start = time.perf_counter()
    raster = _symbolize_with(config, cube)
    elapsed = time.perf_counter() - start
    for x, y in raster.rejected_pixels():
        sys.stderr.write(f"pixel ({x}, {y}): missing samples, rejected\n")
    write_raster(raster, args.out)
    print(
        f"symbolized {raster.width * raster.height} pixels "
        f"({int(raster.degenerate.sum())} degenerate, {int(raster.rejected.sum())} rejected) "
        f"in {_fmt(elapsed)} s -> {args.out}"
    )
    return EXIT_OK


def cmd_stats(args) -> int:
    raster = read_raster(args.input)
    rows = "".join(f"{word},{count}\n" for word, count in word_histogram(raster).items())
    _emit(args.out, rows)
    return EXIT_OK


def _sniff_cube(path) -> bool:
    with open(path, "rb") as handle:
        return handle.read(4) == MAGIC


def cmd_query(args) -> int:
    probe_values = read_probe(args.probe)
    probe = TimeSeries.from_values(probe_values)
    if _sniff_cube(args.input):
        _require(args, "query on a cube", ("-w/--word-length", "word_length"), ("-a/--alphabet-size", "alphabet_size"))
        config = RunConfig.from_args(args)
        raster = _symbolize_with(config, read_cube(config.input_path))
    else:
        raster = read_raster(args.input)
    hits = query_mindist(raster, probe, args.radius, epsilon_std=args.epsilon_std)
    if args.out:
        _emit(args.out, "".join(f"{x},{y},{_full(d)}\n" for x, y, d in hits))
    else:
        sys.stdout.write("".join(f"{x},{y},{_fmt(d)}\n" for x, y, d in hits))
    return EXIT_OK


def cmd_export(args) -> int:
    cube = read_cube(args.input)
    if not 0 <= args.band < cube.bands:
        raise IndexError(f"band {args.band} outside 0..{cube.bands - 1}")
    band = cube.data[args.band]
    rows = "".join(",".join(_full(v) for v in row) + "\n" for row in band)
    _emit(args.out, rows)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO
    except CubeFormatError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FORMAT
    except (SitsaxError, IndexError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVARIANT
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO
    except Exception as exc:  # pragma: no cover - safety net
        sys.stderr.write(f"error: unexpected {type(exc).__name__}: {exc}\n")
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
