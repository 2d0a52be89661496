import struct

import numpy as np
import pytest

from sitsax import RasterCube, symbolize_cube
from sitsax.cubefile import (
    DTYPE_FLOAT64,
    DTYPE_INT16,
    parse_iso_date,
    read_band,
    read_cube,
    read_manifest,
    read_pair_manifest,
    read_probe,
    read_raster,
    write_cube,
    write_raster,
)
from sitsax.errors import CubeFormatError, ValidationError

from conftest import build_cube, random_ndvi_cube


class TestCubeRoundTrip:
    def test_float64_bit_exact(self, tmp_path):
        cube = random_ndvi_cube(7, 5, 11, seed=1)
        path = tmp_path / "c.sits"
        write_cube(cube, path)
        back = read_cube(path)
        assert back.width == 7 and back.height == 5 and back.bands == 11
        assert np.array_equal(back.band_dates, cube.band_dates)
        assert np.array_equal(back.data, cube.data)
        assert not back.missing.any()
        assert back.dtype_code == DTYPE_FLOAT64

    def test_float64_with_nan_missing(self, tmp_path):
        vals = random_ndvi_cube(3, 3, 5, seed=2).data.copy()
        missing = np.zeros_like(vals, dtype=bool)
        missing[1, 2, 0] = True
        vals[1, 2, 0] = np.nan
        cube = build_cube(vals, missing=missing)
        path = tmp_path / "c.sits"
        write_cube(cube, path)
        back = read_cube(path)
        assert back.missing[1, 2, 0]
        assert np.isnan(back.data[1, 2, 0])
        ok = ~missing
        assert np.array_equal(back.data[ok], cube.data[ok])

    def test_int16_scaled_roundtrip(self, tmp_path):
        raw = np.array(
            [[[2500, -3000], [10000, 0]], [[1234, 5678], [-3000, -2000]]], dtype=np.int16
        )
        missing = raw == -3000
        vals = raw * 0.0001
        vals[missing] = np.nan
        cube = build_cube(
            vals,
            missing=missing,
            scale=0.0001,
            offset=0.0,
            missing_value=-3000.0,
            dtype_code=DTYPE_INT16,
        )
        path = tmp_path / "c16.sits"
        write_cube(cube, path)
        back = read_cube(path)
        assert back.dtype_code == DTYPE_INT16
        assert back.scale == 0.0001
        assert np.array_equal(back.missing, missing)
        assert back.data[0, 0, 0] == pytest.approx(0.25, abs=1e-12)
        # payload on disk is the original raw int16 values
        payload = path.read_bytes()[-raw.size * 2 :]
        assert np.array_equal(np.frombuffer(payload, dtype="<i2").reshape(raw.shape), raw)

    def test_float64_with_numeric_sentinel(self, tmp_path):
        vals = random_ndvi_cube(3, 2, 4, seed=9).data.copy()
        missing = np.zeros_like(vals, dtype=bool)
        missing[2, 1, 1] = True
        vals[2, 1, 1] = np.nan
        cube = build_cube(vals, missing=missing, missing_value=-9999.0)
        path = tmp_path / "c.sits"
        write_cube(cube, path)
        # on disk the gap carries the sentinel, not NaN
        payload = np.frombuffer(path.read_bytes()[43 + 4 * 8 :], dtype="<f8")
        assert -9999.0 in payload
        back = read_cube(path)
        assert back.missing[2, 1, 1]
        assert np.isnan(back.data[2, 1, 1])
        ok = ~missing
        assert np.array_equal(back.data[ok], cube.data[ok])

    def test_rerun_writes_identical_bytes(self, tmp_path):
        cube = random_ndvi_cube(5, 4, 6, seed=3)
        p1, p2 = tmp_path / "a.sits", tmp_path / "b.sits"
        write_cube(cube, p1)
        write_cube(cube, p2)
        assert p1.read_bytes() == p2.read_bytes()


class TestCubeHeaderLayout:
    def test_exact_binary_layout(self, tmp_path):
        cube = build_cube(
            np.linspace(-0.5, 0.5, 12).reshape(3, 2, 2), dates=[10, 26, 42]
        )
        path = tmp_path / "c.sits"
        write_cube(cube, path)
        blob = path.read_bytes()
        magic, version, width, height, bands, dtype, scale, offset, sentinel = (
            struct.unpack("<4sHIIIBddd", blob[:43])
        )
        assert magic == b"SITS"
        assert version == 1
        assert (width, height, bands) == (2, 2, 3)
        assert dtype == DTYPE_FLOAT64
        assert scale == 1.0 and offset == 0.0
        assert np.isnan(sentinel)
        dates = np.frombuffer(blob[43 : 43 + 24], dtype="<i8")
        assert list(dates) == [10, 26, 42]
        payload = np.frombuffer(blob[43 + 24 :], dtype="<f8")
        assert np.array_equal(payload, cube.data.ravel())

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "bad.sits"
        path.write_bytes(b"NOPE" + bytes(100))
        with pytest.raises(CubeFormatError):
            read_cube(path)

    def test_bad_version(self, tmp_path):
        cube = random_ndvi_cube(2, 2, 2)
        path = tmp_path / "c.sits"
        write_cube(cube, path)
        blob = bytearray(path.read_bytes())
        blob[4:6] = struct.pack("<H", 9)
        path.write_bytes(bytes(blob))
        with pytest.raises(CubeFormatError):
            read_cube(path)

    def test_truncated_payload(self, tmp_path):
        cube = random_ndvi_cube(3, 3, 2)
        path = tmp_path / "c.sits"
        write_cube(cube, path)
        path.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(CubeFormatError):
            read_cube(path)

    def test_trailing_garbage(self, tmp_path):
        cube = random_ndvi_cube(3, 3, 2)
        path = tmp_path / "c.sits"
        write_cube(cube, path)
        path.write_bytes(path.read_bytes() + b"x")
        with pytest.raises(CubeFormatError):
            read_cube(path)

    def test_int16_write_requires_real_sentinel(self, tmp_path):
        cube = build_cube(np.zeros((2, 1, 1)), dtype_code=DTYPE_INT16)
        with pytest.raises(ValidationError):
            write_cube(cube, tmp_path / "c.sits")


class TestRasterFile:
    def test_roundtrip(self, tmp_path):
        raster = symbolize_cube(random_ndvi_cube(9, 4, 12, seed=5), w=4, a=3)
        path = tmp_path / "r.saxr"
        write_raster(raster, path)
        back = read_raster(path)
        assert (back.width, back.height, back.n, back.w, back.a) == (9, 4, 12, 4, 3)
        assert np.array_equal(back.codes, raster.codes)

    def test_text_layout(self, tmp_path):
        raster = symbolize_cube(random_ndvi_cube(2, 2, 6, seed=6), w=3, a=3)
        path = tmp_path / "r.saxr"
        write_raster(raster, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "w=3 a=3 n=6 width=2 height=2"
        assert len(lines) == 5
        assert lines[1:] == raster.words()

    def test_bad_header(self, tmp_path):
        path = tmp_path / "r.saxr"
        path.write_text("wrong header\nabc\n")
        with pytest.raises(CubeFormatError):
            read_raster(path)

    def test_wrong_word_count(self, tmp_path):
        path = tmp_path / "r.saxr"
        path.write_text("w=3 a=3 n=6 width=2 height=2\nabc\nabc\nabc\n")
        with pytest.raises(CubeFormatError):
            read_raster(path)

    def test_wrong_word_length(self, tmp_path):
        path = tmp_path / "r.saxr"
        path.write_text("w=3 a=3 n=6 width=1 height=2\nabc\nab\n")
        with pytest.raises(CubeFormatError):
            read_raster(path)

    def test_symbol_outside_alphabet(self, tmp_path):
        path = tmp_path / "r.saxr"
        path.write_text("w=3 a=3 n=6 width=1 height=2\nabc\nabd\n")
        with pytest.raises(CubeFormatError):
            read_raster(path)


class TestBandsAndManifests:
    def test_csv_band(self, tmp_path):
        path = tmp_path / "b.csv"
        path.write_text("0.1,0.2\n0.3,0.4\n")
        band = read_band(path)
        assert band.shape == (2, 2)
        assert band[1, 0] == 0.3

    def test_binary_band_int16(self, tmp_path):
        path = tmp_path / "b.bin"
        np.array([1, 2, 3, 4, 5, 6], dtype="<i2").tofile(path)
        band = read_band(path, width=3, height=2, dtype="int16")
        assert band.shape == (2, 3)
        assert band[1, 2] == 6.0

    def test_binary_band_needs_dimensions(self, tmp_path):
        path = tmp_path / "b.bin"
        path.write_bytes(bytes(8))
        with pytest.raises(CubeFormatError):
            read_band(path, dtype="float64")

    def test_binary_band_size_mismatch(self, tmp_path):
        path = tmp_path / "b.bin"
        np.zeros(5, dtype="<i2").tofile(path)
        with pytest.raises(CubeFormatError):
            read_band(path, width=2, height=2, dtype="int16")

    def test_manifest_paths_relative_to_file(self, tmp_path):
        (tmp_path / "b1.csv").write_text("0.5\n")
        (tmp_path / "b2.csv").write_text("0.6\n")
        manifest = tmp_path / "m.txt"
        manifest.write_text("b1.csv,2000-02-18\nb2.csv,2000-03-05\n\n")
        entries = read_manifest(manifest)
        assert len(entries) == 2
        assert entries[0][0] == tmp_path / "b1.csv"
        assert entries[0][1] == parse_iso_date("2000-02-18")

    def test_manifest_bad_line(self, tmp_path):
        manifest = tmp_path / "m.txt"
        manifest.write_text("onlyonefield\n")
        with pytest.raises(CubeFormatError):
            read_manifest(manifest)

    def test_manifest_bad_date(self, tmp_path):
        manifest = tmp_path / "m.txt"
        manifest.write_text("b.csv,18-02-2000\n")
        with pytest.raises(CubeFormatError):
            read_manifest(manifest)

    def test_pair_manifest(self, tmp_path):
        manifest = tmp_path / "m.txt"
        manifest.write_text("nir0.csv,red0.csv,2001-01-01\nnir1.csv,red1.csv,2001-01-17\n")
        entries = read_pair_manifest(manifest)
        assert len(entries) == 2
        assert entries[1][0].name == "nir1.csv"
        assert entries[1][1].name == "red1.csv"

    def test_probe(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("0.1\n0.25\n-0.3\n")
        probe = read_probe(path)
        assert np.allclose(probe, [0.1, 0.25, -0.3])

    def test_probe_rejects_nonfinite(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("0.1\nnan\n")
        with pytest.raises(CubeFormatError):
            read_probe(path)

    def test_iso_date_parsing(self):
        assert parse_iso_date("1970-01-01") == 0
        assert parse_iso_date("1970-01-02") == 1
        assert parse_iso_date("2002-12-19") == 12040
        with pytest.raises(CubeFormatError):
            parse_iso_date("Dec 19 2002")
