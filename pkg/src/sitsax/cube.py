"""Space-time NDVI cube: ingestion, pixel series, whole-cube symbolization,
and symbolic similarity queries.

A cube stacks co-registered rasters of one scene over time; reading down
through the stack at one (x, y) yields that pixel's NDVI time series. Cubes
are immutable after construction, so symbolization and queries can fan out
over pixels across any number of workers; every output slot is pre-sized
and keyed by pixel index, which keeps results identical for any worker
count or visitation order.
"""

import datetime as dt
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    MissingDataError,
    PartitionError,
    ShapeError,
    ValidationError,
    WordMismatchError,
)
from .paa import paa_rows
from .sax import SaxWord, breakpoints, codes_to_text, distance_matrix, symbol_codes
from .series import DEFAULT_EPSILON_STD, TimeSeries, znormalize_rows

__all__ = [
    "FillPolicy",
    "RasterCube",
    "SymbolicRaster",
    "compute_ndvi",
    "ingest",
    "pixel_series",
    "symbolize_cube",
    "word_histogram",
    "query_mindist",
    "days_since_epoch",
]

_EPOCH = dt.date(1970, 1, 1)

# pixels per work unit when symbolizing; small enough to keep per-thread
# scratch arrays in cache-friendly territory, large enough to amortize call
# overhead
_BLOCK_PIXELS = 16384

_NDVI_TOL = 1e-9


class FillPolicy(str, Enum):
    """What to do with missing samples when extracting a pixel series."""

    REJECT = "reject"
    INTERP = "interp"


def days_since_epoch(date) -> int:
    """Coerce a datetime.date or int day count to int days since 1970-01-01."""
    if isinstance(date, dt.datetime):
        date = date.date()
    if isinstance(date, dt.date):
        return (date - _EPOCH).days
    return int(date)


@dataclass(frozen=True)
class RasterCube:
    """width x height x bands NDVI samples with one acquisition date per band.

    ``data`` is band-major, row-major within a band, float64, with missing
    samples stored as NaN and flagged in ``missing``. ``scale``/``offset``/
    ``missing_value`` record how raw samples were decoded at ingestion;
    ``dtype_code`` picks the on-disk payload encoding (0 float64, 1 scaled
    int16). Arrays are read-only after construction.
    """

    width: int
    height: int
    band_dates: np.ndarray
    data: np.ndarray
    missing: np.ndarray
    scale: float = 1.0
    offset: float = 0.0
    missing_value: float = float("nan")
    dtype_code: int = 0

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValidationError("cube dimensions must be positive")
        dates = np.ascontiguousarray(self.band_dates, dtype=np.int64)
        if dates.ndim != 1 or len(dates) < 1:
            raise ValidationError("a cube needs at least one dated band")
        if len(dates) > 1 and not np.all(np.diff(dates) > 0):
            raise ValidationError("band dates must be strictly increasing")
        data = np.ascontiguousarray(self.data, dtype=np.float64)
        missing = np.ascontiguousarray(self.missing, dtype=bool)
        expected = (len(dates), self.height, self.width)
        if data.shape != expected:
            raise ValidationError(f"data shape {data.shape} != {expected}")
        if missing.shape != expected:
            raise ValidationError(f"missing mask shape {missing.shape} != {expected}")
        if self.dtype_code not in (0, 1):
            raise ValidationError(f"unknown dtype code {self.dtype_code}")
        if missing.any():
            data = data.copy()
            data[missing] = np.nan
        valid = np.where(missing, 0.0, data)
        if not np.all(np.isfinite(valid)):
            raise ValidationError("non-missing samples must be finite")
        if not np.all(np.abs(valid) <= 1.0 + _NDVI_TOL):
            raise ValidationError("non-missing NDVI samples must lie in [-1, 1]")
        for arr in (dates, data, missing):
            arr.setflags(write=False)
        object.__setattr__(self, "band_dates", dates)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "missing", missing)

    @property
    def bands(self) -> int:
        return len(self.band_dates)


@dataclass(frozen=True)
class SymbolicRaster:
    """One SAX word per pixel, row-major, all sharing (n, w, a).

    Words are held as a (pixels, w) matrix of symbol indices rather than
    strings; ``word``/``words`` render on demand. ``degenerate`` marks pixels
    that hit the zero-variance rule, ``rejected`` marks pixels dropped by the
    fill policy (their slot holds the all-middle placeholder word).
    """

    width: int
    height: int
    n: int
    a: int
    codes: np.ndarray
    degenerate: np.ndarray
    rejected: np.ndarray

    def __post_init__(self):
        codes = np.ascontiguousarray(self.codes, dtype=np.uint8)
        pixels = self.width * self.height
        if codes.ndim != 2 or codes.shape[0] != pixels:
            raise ValidationError(f"need {pixels} words, got shape {codes.shape}")
        if not 1 <= codes.shape[1] <= self.n:
            raise ValidationError("word length must be in [1, n]")
        if codes.size and codes.max() >= self.a:
            raise ValidationError("symbol index outside alphabet")
        degenerate = np.ascontiguousarray(self.degenerate, dtype=bool)
        rejected = np.ascontiguousarray(self.rejected, dtype=bool)
        if degenerate.shape != (pixels,) or rejected.shape != (pixels,):
            raise ValidationError("per-pixel flags must have one entry per pixel")
        for arr in (codes, degenerate, rejected):
            arr.setflags(write=False)
        object.__setattr__(self, "codes", codes)
        object.__setattr__(self, "degenerate", degenerate)
        object.__setattr__(self, "rejected", rejected)

    @property
    def w(self) -> int:
        return self.codes.shape[1]

    def pixel_index(self, x: int, y: int) -> int:
        if not (0 <= x < self.width and 0 <= y < self.height):
            raise IndexError(f"pixel ({x}, {y}) outside {self.width}x{self.height}")
        return y * self.width + x

    def word(self, x: int, y: int) -> SaxWord:
        return SaxWord(codes_to_text(self.codes[self.pixel_index(x, y)]), n=self.n, a=self.a)

    def words(self) -> list:
        """All words as plain strings, row-major."""
        text = codes_to_text(self.codes.ravel())
        w = self.w
        return [text[i : i + w] for i in range(0, len(text), w)]

    def rejected_pixels(self) -> list:
        """(x, y) coordinates of pixels dropped by the fill policy, row-major."""
        return [
            (int(p % self.width), int(p // self.width))
            for p in np.flatnonzero(self.rejected)
        ]


def compute_ndvi(nir, red, missing=None):
    """Per-pixel (NIR - R) / (NIR + R) from two reflectance bands.

    Returns ``(ndvi, missing_mask)``: results always lie in [-1, 1] for
    non-negative reflectances; samples with a zero denominator or flagged
    missing on input come back as NaN and masked.
    """
    nir = np.asarray(nir, dtype=np.float64)
    red = np.asarray(red, dtype=np.float64)
    if nir.shape != red.shape:
        raise ShapeError(f"band shapes differ: {nir.shape} vs {red.shape}")
    if missing is None:
        missing = np.zeros(nir.shape, dtype=bool)
    else:
        missing = np.asarray(missing, dtype=bool)
        if missing.shape != nir.shape:
            raise ShapeError(f"missing mask shape {missing.shape} != {nir.shape}")
    ok = ~missing
    if np.any(nir[ok] < 0) or np.any(red[ok] < 0):
        raise ValidationError("reflectances must be non-negative where non-missing")
    denom = nir + red
    out_missing = missing | (denom == 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ndvi = (nir - red) / denom
    ndvi[out_missing] = np.nan
    return ndvi, out_missing


def ingest(
    band_files,
    *,
    scale: float = 1.0,
    offset: float = 0.0,
    missing_value: float = float("nan"),
    width: int = None,
    height: int = None,
    dtype: str = "float64",
) -> RasterCube:
    """Stack dated band files into a cube, decoding raw values on the way in.

    ``band_files`` is a sequence of (path, date) pairs; bands are sorted by
    date and must not repeat one. Raw samples equal to ``missing_value`` are
    masked; the rest become value*scale + offset (the MODIS scaled-int16
    convention with scale 1e-4 is the common case). CSV bands infer their
    grid; flat binary bands need ``width``/``height``/``dtype``.
    """
    from .cubefile import read_band

    if not band_files:
        raise ValidationError("a cube needs at least one band")
    dated = sorted(
        ((days_since_epoch(date), path) for path, date in band_files), key=lambda t: t[0]
    )
    days = [d for d, _ in dated]
    for prev, cur in zip(days, days[1:]):
        if cur == prev:
            raise ValidationError(f"duplicate acquisition date (day {cur})")
    rasters = [read_band(path, width=width, height=height, dtype=dtype) for _, path in dated]
    shape = rasters[0].shape
    for (_, path), band in zip(dated, rasters):
        if band.shape != shape:
            raise ShapeError(f"band {path} has shape {band.shape}, expected {shape}")
    raw = np.stack(rasters)
    if np.isnan(missing_value):
        missing = np.isnan(raw)
    else:
        missing = raw == missing_value
    values = raw * scale + offset
    values[missing] = np.nan
    return RasterCube(
        width=shape[1],
        height=shape[0],
        band_dates=np.asarray(days, dtype=np.int64),
        data=values,
        missing=missing,
        scale=scale,
        offset=offset,
        missing_value=missing_value,
        dtype_code=1 if dtype == "int16" else 0,
    )


def _fill_row(values: np.ndarray, missing: np.ndarray) -> np.ndarray:
    """Linear interpolation over interior gaps, constant at the ends."""
    good = np.flatnonzero(~missing)
    idx = np.arange(len(values))
    return np.interp(idx, good, values[good])


def pixel_series(cube: RasterCube, x: int, y: int, fill=FillPolicy.REJECT) -> TimeSeries:
    """Extract the dated series for one pixel, resolving gaps per the policy."""
    fill = FillPolicy(fill)
    if not (0 <= x < cube.width and 0 <= y < cube.height):
        raise IndexError(f"pixel ({x}, {y}) outside {cube.width}x{cube.height} cube")
    values = cube.data[:, y, x].copy()
    missing = cube.missing[:, y, x]
    if missing.any():
        if missing.all():
            raise MissingDataError(f"pixel ({x}, {y}) has no valid samples")
        if fill is FillPolicy.REJECT:
            raise MissingDataError(
                f"pixel ({x}, {y}) has {int(missing.sum())} missing samples"
            )
        values = _fill_row(values, missing)
    return TimeSeries(cube.band_dates, values)


def symbolize_cube(
    cube: RasterCube,
    w: int,
    a: int,
    epsilon_std: float = DEFAULT_EPSILON_STD,
    *,
    fill=FillPolicy.REJECT,
    workers: int = 1,
) -> SymbolicRaster:
    """Symbolize every pixel of a cube into one word per pixel.

    Equivalent to per-pixel ``sax`` but vectorized over row blocks. Pixels
    dropped by the fill policy are flagged ``rejected`` and take the
    all-middle placeholder word; constant pixels are flagged ``degenerate``.
    Output is bit-identical for any ``workers`` value.
    """
    fill = FillPolicy(fill)
    table = breakpoints(a)
    bands, pixels = cube.bands, cube.width * cube.height
    if w < 1 or w > bands:
        raise PartitionError(f"cannot reduce {bands} bands to {w} frames")
    if workers < 1:
        raise ValidationError("worker count must be at least 1")

    flat_data = cube.data.reshape(bands, pixels)
    flat_missing = cube.missing.reshape(bands, pixels)
    codes = np.empty((pixels, w), dtype=np.uint8)
    degenerate = np.zeros(pixels, dtype=bool)
    rejected = np.zeros(pixels, dtype=bool)

    def run_block(lo: int, hi: int) -> None:
        block = flat_data[:, lo:hi].T.copy()
        miss = flat_missing[:, lo:hi].T
        has_gap = miss.any(axis=1)
        if has_gap.any():
            all_gone = miss.all(axis=1)
            if fill is FillPolicy.REJECT:
                reject = has_gap
            else:
                reject = all_gone
                for r in np.flatnonzero(has_gap & ~all_gone):
                    block[r] = _fill_row(block[r], miss[r])
            block[reject] = 0.0
            rejected[lo:hi] = reject
        z, degen = znormalize_rows(block, epsilon_std)
        codes[lo:hi] = symbol_codes(paa_rows(z, w), table)
        degenerate[lo:hi] = degen & ~rejected[lo:hi]

    spans = [(lo, min(lo + _BLOCK_PIXELS, pixels)) for lo in range(0, pixels, _BLOCK_PIXELS)]
    if workers == 1 or len(spans) == 1:
        for lo, hi in spans:
            run_block(lo, hi)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda span: run_block(*span), spans))

    return SymbolicRaster(
        width=cube.width,
        height=cube.height,
        n=bands,
        a=a,
        codes=codes,
        degenerate=degenerate,
        rejected=rejected,
    )


def word_histogram(raster: SymbolicRaster) -> dict:
    """Word -> pixel count, keys in lexicographic order."""
    counts = Counter(raster.words())
    return dict(sorted(counts.items()))


def query_mindist(
    raster: SymbolicRaster,
    probe: TimeSeries,
    radius: float,
    epsilon_std: float = DEFAULT_EPSILON_STD,
) -> list:
    """All pixels whose word sits within ``radius`` of the probe's word.

    Results are (x, y, distance) sorted by distance, then row-major. Because
    the word distance lower-bounds the true Euclidean distance, every pixel
    within the true radius is guaranteed to appear (no false dismissals);
    some returned pixels may lie farther away.
    """
    from .sax import sax

    if probe.n != raster.n:
        raise WordMismatchError(
            f"probe length {probe.n} does not match raster series length {raster.n}"
        )
    radius = float(radius)
    if np.isnan(radius) or radius < 0:
        raise ValidationError("radius must be non-negative")
    probe_codes = sax(probe, raster.w, raster.a, epsilon_std).indices()
    cells = distance_matrix(breakpoints(raster.a))[raster.codes, probe_codes[None, :]]
    dists = np.sqrt(raster.n / raster.w) * np.sqrt((cells * cells).sum(axis=1))
    hits = np.flatnonzero(dists <= radius)
    hits = hits[np.argsort(dists[hits], kind="stable")]
    return [
        (int(p % raster.width), int(p // raster.width), float(dists[p])) for p in hits
    ]
