import sys
from pathlib import Path

import numpy as np
import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent

sys.path.insert(0, str(Path(__file__).resolve().parent))


@pytest.fixture
def repo_root():
    return REPO_ROOT


def build_cube(values, dates=None, missing=None, **kwargs):
    """Assemble a RasterCube from a (bands, height, width) array."""
    from sitsax import RasterCube

    values = np.asarray(values, dtype=np.float64)
    bands = values.shape[0]
    if dates is None:
        dates = np.arange(bands, dtype=np.int64) * 16
    if missing is None:
        missing = np.zeros(values.shape, dtype=bool)
    return RasterCube(
        width=values.shape[2],
        height=values.shape[1],
        band_dates=np.asarray(dates, dtype=np.int64),
        data=values,
        missing=np.asarray(missing, dtype=bool),
        **kwargs,
    )


def random_ndvi_cube(width, height, bands, seed=0):
    rng = np.random.default_rng(seed)
    vals = rng.uniform(-0.2, 0.9, size=(bands, height, width))
    return build_cube(vals)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
