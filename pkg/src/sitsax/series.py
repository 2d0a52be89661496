"""Core time-series types, z-normalization, and episode partitioning.

A series is an ordered run of (date, value) observations for one pixel or
probe. Dates are carried as metadata only: normalization and episode
splitting are index-based, matching the evenly-indexed treatment of
fixed-cadence acquisitions.
"""

from dataclasses import dataclass

import numpy as np

from .errors import AlphabetError, PartitionError, ValidationError

__all__ = [
    "DEFAULT_EPSILON_STD",
    "TimeSeries",
    "Episode",
    "Alphabet",
    "znormalize",
    "znormalize_rows",
    "make_episodes",
]

DEFAULT_EPSILON_STD = 1e-8

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class TimeSeries:
    """Ordered (date, value) observations; dates are int days since epoch.

    Dates must be strictly increasing and values finite: missing samples are
    resolved before a series is built (see the cube module's fill policies).
    Arrays are stored read-only so instances can be shared across workers.
    """

    dates: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        dates = np.ascontiguousarray(self.dates, dtype=np.int64)
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if dates.ndim != 1 or values.ndim != 1:
            raise ValidationError("dates and values must be one-dimensional")
        if dates.shape != values.shape:
            raise ValidationError(
                f"length mismatch: {len(dates)} dates vs {len(values)} values"
            )
        if len(values) == 0:
            raise ValidationError("a series needs at least one observation")
        if len(dates) > 1 and not np.all(np.diff(dates) > 0):
            raise ValidationError("dates must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ValidationError("series values must be finite")
        dates.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_values(cls, values) -> "TimeSeries":
        """Build a series with synthetic dates 0..n-1."""
        values = np.asarray(values, dtype=np.float64)
        return cls(np.arange(len(values), dtype=np.int64), values)

    @property
    def n(self) -> int:
        return len(self.values)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Episode:
    """One contiguous run of series indices aggregated into a single unit.

    Bounds are inclusive. ``weights`` holds one entry per covered index;
    interior indices weigh 1 while a boundary index shared with the adjacent
    episode carries its fractional share instead.
    """

    start_index: int
    end_index: int
    weights: tuple

    def __post_init__(self):
        if self.start_index > self.end_index:
            raise ValidationError("episode start must not exceed its end")
        if self.start_index < 0:
            raise ValidationError("episode indices must be non-negative")
        span = self.end_index - self.start_index + 1
        if len(self.weights) != span:
            raise ValidationError(f"expected {span} weights, got {len(self.weights)}")
        if any(wt <= 0 for wt in self.weights):
            raise ValidationError("episode weights must be positive")

    @property
    def indices(self) -> range:
        return range(self.start_index, self.end_index + 1)

    @property
    def mass(self) -> float:
        return float(sum(self.weights))


@dataclass(frozen=True)
class Alphabet:
    """Ordered lowercase symbols 'a'.. for increasing value classes."""

    size: int

    def __post_init__(self):
        if not isinstance(self.size, int) or not 2 <= self.size <= 26:
            raise AlphabetError(f"alphabet size must be in [2, 26], got {self.size!r}")

    @property
    def symbols(self) -> str:
        return _LETTERS[: self.size]

    def letter(self, index: int) -> str:
        return self.symbols[index]

    def index(self, letter: str) -> int:
        pos = self.symbols.find(letter)
        if pos < 0:
            raise AlphabetError(f"{letter!r} is not in an alphabet of size {self.size}")
        return pos


def znormalize_rows(values: np.ndarray, epsilon_std: float = DEFAULT_EPSILON_STD):
    """Z-normalize each row of a 2-D array in one vectorized pass.

    Returns ``(normalized, degenerate)`` where ``degenerate`` flags rows whose
    population standard deviation was at or below ``epsilon_std``; those rows
    come back as exact zeros instead of blowing up.
    """
    if epsilon_std <= 0:
        raise ValidationError("epsilon_std must be positive")
    values = np.asarray(values, dtype=np.float64)
    mean = values.mean(axis=1, keepdims=True)
    std = values.std(axis=1, keepdims=True)  # population (divide by n)
    degenerate = std[:, 0] <= epsilon_std
    out = values - mean
    np.divide(out, np.where(std <= epsilon_std, 1.0, std), out=out)
    out[degenerate] = 0.0
    return out, degenerate


def znormalize(series: TimeSeries, epsilon_std: float = DEFAULT_EPSILON_STD) -> TimeSeries:
    """Center and scale a series to mean 0, population standard deviation 1.

    Series at or below the ``epsilon_std`` deviation threshold (constant
    pixels, single points) map to all zeros rather than erroring, so they
    later symbolize to the middle letter. Dates pass through unchanged.
    """
    out, _ = znormalize_rows(series.values[None, :], epsilon_std)
    return TimeSeries(series.dates, out[0])


def make_episodes(n: int, w: int) -> list:
    """Split index domain [0, n-1] into w contiguous equal-mass episodes.

    When ``w`` divides ``n`` every episode covers exactly n/w indices with
    unit weights. Otherwise each boundary sample is shared between the two
    frames it straddles, weighted by overlap, so every episode carries the
    same total mass n/w. All bookkeeping is integer-exact: positions are
    scaled by w so frame edges land on whole numbers.
    """
    if w < 1 or w > n:
        raise PartitionError(f"cannot split {n} indices into {w} episodes")
    episodes = []
    for i in range(w):
        lo, hi = i * n, (i + 1) * n  # frame bounds, scaled by w
        start = lo // w
        end = (hi - 1) // w
        weights = tuple(
            (min(hi, (j + 1) * w) - max(lo, j * w)) / w for j in range(start, end + 1)
        )
        episodes.append(Episode(start, end, weights))
    return episodes
