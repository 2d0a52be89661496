"""On-disk formats: binary cube files, symbolic raster text files, manifests.

Cube file layout (all little-endian, no padding):

    magic "SITS" (4 bytes)
    format version      u16   (currently 1)
    width               u32
    height              u32
    bands               u32
    dtype code          u8    (0 = float64 values, 1 = scaled int16)
    scale               f64
    offset              f64
    missing sentinel    f64
    band dates          bands x i64, days since Unix epoch
    payload             bands x height x width samples

A float64 payload stores final sample values (scale/offset are ingestion
provenance; the sentinel, NaN by default, marks missing samples). An int16
payload stores raw instrument values: readers decode raw*scale + offset and
mask samples equal to the sentinel.

Symbolic raster files are plain text: a header line
``w=<w> a=<a> n=<n> width=<W> height=<H>`` followed by one ASCII word per
pixel, row-major. Manifests list one ``path,ISO-date`` band per line
(``nir,red,ISO-date`` for reflectance pairs); relative paths resolve
against the manifest's own directory. All writers go through a temp file
plus atomic rename.
"""

import datetime as dt
import os
import re
import struct
import tempfile
from pathlib import Path

import numpy as np

from .cube import RasterCube, SymbolicRaster, days_since_epoch
from .errors import CubeFormatError, ValidationError

__all__ = [
    "DTYPE_FLOAT64",
    "DTYPE_INT16",
    "FORMAT_VERSION",
    "read_cube",
    "write_cube",
    "read_raster",
    "write_raster",
    "read_band",
    "read_manifest",
    "read_pair_manifest",
    "read_probe",
    "parse_iso_date",
    "atomic_write_bytes",
]

MAGIC = b"SITS"
FORMAT_VERSION = 1
DTYPE_FLOAT64 = 0
DTYPE_INT16 = 1

_HEADER = struct.Struct("<4sHIIIBddd")
_PAYLOAD_DTYPES = {DTYPE_FLOAT64: np.dtype("<f8"), DTYPE_INT16: np.dtype("<i2")}
_RASTER_HEADER = re.compile(r"^w=(\d+) a=(\d+) n=(\d+) width=(\d+) height=(\d+)$")


def atomic_write_bytes(path, payload: bytes) -> None:
    """Write via a sibling temp file and rename, so readers never see a
    partial file."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def parse_iso_date(text: str) -> int:
    """ISO-8601 calendar date -> int days since 1970-01-01."""
    try:
        return days_since_epoch(dt.date.fromisoformat(text.strip()))
    except ValueError as exc:
        raise CubeFormatError(f"bad ISO date {text!r}: {exc}") from None


def write_cube(cube: RasterCube, path) -> None:
    """Serialize a cube to its binary file, atomically."""
    header = _HEADER.pack(
        MAGIC,
        FORMAT_VERSION,
        cube.width,
        cube.height,
        cube.bands,
        cube.dtype_code,
        cube.scale,
        cube.offset,
        cube.missing_value,
    )
    dates = cube.band_dates.astype("<i8").tobytes()
    if cube.dtype_code == DTYPE_FLOAT64:
        data = cube.data
        if not np.isnan(cube.missing_value) and cube.missing.any():
            data = np.where(cube.missing, cube.missing_value, data)
        payload = np.ascontiguousarray(data, dtype="<f8").tobytes()
    else:
        if np.isnan(cube.missing_value):
            raise ValidationError("int16 cubes need a non-NaN missing sentinel")
        raw = np.rint((np.where(cube.missing, 0.0, cube.data) - cube.offset) / cube.scale)
        raw = np.where(cube.missing, cube.missing_value, raw)
        if raw.min() < -32768 or raw.max() > 32767:
            raise ValidationError("raw samples do not fit in int16")
        payload = raw.astype("<i2").tobytes()
    atomic_write_bytes(path, header + dates + payload)


def read_cube(path) -> RasterCube:
    """Parse a binary cube file; strict about layout and sample counts."""
    path = Path(path)
    with open(path, "rb") as handle:
        head = handle.read(_HEADER.size)
        if len(head) < _HEADER.size:
            raise CubeFormatError(f"{path}: too short for a cube header")
        magic, version, width, height, bands, dtype_code, scale, offset, sentinel = (
            _HEADER.unpack(head)
        )
        if magic != MAGIC:
            raise CubeFormatError(f"{path}: not a cube file (magic {magic!r})")
        if version != FORMAT_VERSION:
            raise CubeFormatError(f"{path}: unsupported format version {version}")
        if dtype_code not in _PAYLOAD_DTYPES:
            raise CubeFormatError(f"{path}: unknown dtype code {dtype_code}")
        if min(width, height, bands) < 1:
            raise CubeFormatError(f"{path}: empty dimensions {width}x{height}x{bands}")
        dates = np.fromfile(handle, dtype="<i8", count=bands)
        if len(dates) < bands:
            raise CubeFormatError(f"{path}: truncated date table")
        count = width * height * bands
        raw = np.fromfile(handle, dtype=_PAYLOAD_DTYPES[dtype_code], count=count)
        if len(raw) < count:
            raise CubeFormatError(f"{path}: truncated payload ({len(raw)}/{count} samples)")
        if handle.read(1):
            raise CubeFormatError(f"{path}: trailing bytes after payload")
    raw = raw.reshape(bands, height, width)
    if dtype_code == DTYPE_FLOAT64:
        values = raw.astype(np.float64)
        missing = np.isnan(values) if np.isnan(sentinel) else values == sentinel
    else:
        missing = raw == sentinel
        values = raw * scale + offset
    values[missing] = np.nan
    if len(dates) > 1 and not np.all(np.diff(dates) > 0):
        raise CubeFormatError(f"{path}: band dates are not strictly increasing")
    return RasterCube(
        width=width,
        height=height,
        band_dates=dates.astype(np.int64),
        data=values,
        missing=missing,
        scale=scale,
        offset=offset,
        missing_value=sentinel,
        dtype_code=dtype_code,
    )


def write_raster(raster: SymbolicRaster, path) -> None:
    """Serialize a symbolic raster as its text format, atomically."""
    header = (
        f"w={raster.w} a={raster.a} n={raster.n} "
        f"width={raster.width} height={raster.height}\n"
    )
    pixels, w = raster.codes.shape
    table = np.empty((pixels, w + 1), dtype=np.uint8)
    table[:, :w] = raster.codes + ord("a")
    table[:, w] = ord("\n")
    atomic_write_bytes(path, header.encode("ascii") + table.tobytes())


def read_raster(path) -> SymbolicRaster:
    path = Path(path)
    text = path.read_text(encoding="ascii")
    lines = text.splitlines()
    if not lines:
        raise CubeFormatError(f"{path}: empty raster file")
    match = _RASTER_HEADER.match(lines[0])
    if not match:
        raise CubeFormatError(f"{path}: bad raster header {lines[0]!r}")
    w, a, n, width, height = map(int, match.groups())
    words = lines[1:]
    pixels = width * height
    if len(words) != pixels:
        raise CubeFormatError(f"{path}: expected {pixels} words, found {len(words)}")
    if any(len(word) != w for word in words):
        raise CubeFormatError(f"{path}: every word must have length {w}")
    flat = np.frombuffer("".join(words).encode("ascii"), dtype=np.uint8)
    codes = flat.astype(np.int16) - ord("a")
    if codes.min() < 0 or codes.max() >= a:
        raise CubeFormatError(f"{path}: symbols outside the first {a} letters")
    try:
        return SymbolicRaster(
            width=width,
            height=height,
            n=n,
            a=a,
            codes=codes.astype(np.uint8).reshape(pixels, w),
            degenerate=np.zeros(pixels, dtype=bool),
            rejected=np.zeros(pixels, dtype=bool),
        )
    except ValidationError as exc:
        raise CubeFormatError(f"{path}: {exc}") from None


def read_band(path, *, width: int = None, height: int = None, dtype: str = "float64"):
    """Load one band as a 2-D float64 array of raw (undecoded) values.

    ``.csv`` files carry a comma-separated grid and infer their own shape;
    anything else is flat row-major binary and needs width/height plus the
    sample dtype (``int16`` or ``float64``).
    """
    path = Path(path)
    if path.suffix.lower() == ".csv":
        try:
            band = np.loadtxt(path, delimiter=",", dtype=np.float64, ndmin=2)
        except ValueError as exc:
            raise CubeFormatError(f"{path}: bad CSV band: {exc}") from None
        return band
    if not width or not height:
        raise CubeFormatError(f"{path}: binary bands need explicit --width/--height")
    codes = {"int16": "<i2", "float64": "<f8"}
    if dtype not in codes:
        raise CubeFormatError(f"unsupported band dtype {dtype!r}")
    raw = np.fromfile(path, dtype=codes[dtype])
    if len(raw) != width * height:
        raise CubeFormatError(
            f"{path}: {len(raw)} samples, expected {width}x{height}={width * height}"
        )
    return raw.astype(np.float64).reshape(height, width)


def _manifest_lines(path):
    path = Path(path)
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def read_manifest(path) -> list:
    """Parse ``path,ISO-date`` lines into (Path, days-since-epoch) pairs."""
    base = Path(path).parent
    entries = []
    for lineno, line in _manifest_lines(path):
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 2:
            raise CubeFormatError(f"{path}:{lineno}: expected 'path,ISO-date'")
        entries.append((base / parts[0], parse_iso_date(parts[1])))
    if not entries:
        raise CubeFormatError(f"{path}: manifest lists no bands")
    return entries


def read_pair_manifest(path) -> list:
    """Parse ``nir_path,red_path,ISO-date`` lines for NDVI derivation."""
    base = Path(path).parent
    entries = []
    for lineno, line in _manifest_lines(path):
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 3:
            raise CubeFormatError(f"{path}:{lineno}: expected 'nir,red,ISO-date'")
        entries.append((base / parts[0], base / parts[1], parse_iso_date(parts[2])))
    if not entries:
        raise CubeFormatError(f"{path}: manifest lists no band pairs")
    return entries


def read_probe(path) -> np.ndarray:
    """One value per line -> float64 vector."""
    try:
        values = np.loadtxt(path, dtype=np.float64, ndmin=1)
    except ValueError as exc:
        raise CubeFormatError(f"{path}: bad probe file: {exc}") from None
    if values.ndim != 1 or not np.all(np.isfinite(values)):
        raise CubeFormatError(f"{path}: probe must be one finite value per line")
    return values
