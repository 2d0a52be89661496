"""Symbolize satellite NDVI image time series and query them symbolically.

Pipeline: per-pixel series are z-normalized, reduced to frame means, and
discretized into words over a Gaussian-quantile alphabet; word-to-word
distance lower-bounds the Euclidean distance between the source series, so
symbolic queries never miss a true match.
"""

from .errors import (
    AlphabetError,
    CubeFormatError,
    MissingDataError,
    PartitionError,
    ShapeError,
    SitsaxError,
    SymbolError,
    ValidationError,
    WordMismatchError,
)
from .series import (
    DEFAULT_EPSILON_STD,
    Alphabet,
    Episode,
    TimeSeries,
    make_episodes,
    znormalize,
    znormalize_rows,
)
from .paa import PaaVector, paa, paa_reconstruct, paa_rows, reconstruction_error
from .sax import (
    BreakpointTable,
    SaxWord,
    breakpoints,
    discretize,
    distance_matrix,
    mindist,
    sax,
    symbol_distance,
)
from .cube import (
    FillPolicy,
    RasterCube,
    SymbolicRaster,
    compute_ndvi,
    days_since_epoch,
    ingest,
    pixel_series,
    query_mindist,
    symbolize_cube,
    word_histogram,
)

__version__ = "0.1.0"
