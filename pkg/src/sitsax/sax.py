"""Gaussian-quantile discretization of frame means, and the MINDIST bound.

Breakpoints are the a-1 standard-normal quantiles that cut the real line
into a equiprobable intervals, one per letter. A frame mean equal to a
breakpoint takes the higher letter (half-open intervals). The word-to-word
distance uses the classic cell rule -- zero on and next to the diagonal,
otherwise the breakpoint gap -- which makes it a provable lower bound on
the Euclidean distance between the z-normalized source series.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.stats import norm

from .errors import AlphabetError, SymbolError, ValidationError, WordMismatchError
from .paa import PaaVector, paa
from .series import DEFAULT_EPSILON_STD, Alphabet, TimeSeries, znormalize_rows

__all__ = [
    "BreakpointTable",
    "SaxWord",
    "breakpoints",
    "discretize",
    "sax",
    "symbol_distance",
    "distance_matrix",
    "mindist",
]

_ORD_A = ord("a")


@dataclass(frozen=True)
class BreakpointTable:
    """The a-1 sorted standard-normal quantiles for an alphabet of size a.

    Immutable after construction; share freely across workers.
    """

    alphabet_size: int
    betas: np.ndarray

    def __post_init__(self):
        Alphabet(self.alphabet_size)  # range check
        betas = np.ascontiguousarray(self.betas, dtype=np.float64)
        if betas.shape != (self.alphabet_size - 1,):
            raise ValidationError(
                f"expected {self.alphabet_size - 1} breakpoints, got {betas.shape}"
            )
        if len(betas) > 1 and not np.all(np.diff(betas) > 0):
            raise ValidationError("breakpoints must be strictly increasing")
        betas.setflags(write=False)
        object.__setattr__(self, "betas", betas)


@dataclass(frozen=True)
class SaxWord:
    """A length-w word over the first a lowercase letters, plus provenance.

    Carries the source length n and alphabet size a so distances can recover
    the sqrt(n/w) compression factor and refuse incompatible operands.
    """

    symbols: str
    n: int
    a: int

    def __post_init__(self):
        allowed = Alphabet(self.a).symbols
        if not self.symbols:
            raise ValidationError("a word needs at least one symbol")
        if len(self.symbols) > self.n:
            raise ValidationError(
                f"word length {len(self.symbols)} exceeds source length {self.n}"
            )
        if not set(self.symbols) <= set(allowed):
            raise ValidationError(
                f"word {self.symbols!r} uses symbols outside the first {self.a} letters"
            )

    @property
    def w(self) -> int:
        return len(self.symbols)

    @property
    def params(self) -> tuple:
        return (self.n, self.w, self.a)

    def indices(self) -> np.ndarray:
        """Word as 0-based symbol indices."""
        return np.frombuffer(self.symbols.encode("ascii"), dtype=np.uint8) - _ORD_A


@lru_cache(maxsize=32)
def _cached_breakpoints(a: int) -> BreakpointTable:
    qs = np.arange(1, a) / a
    return BreakpointTable(a, norm.ppf(qs))


def breakpoints(a: int) -> BreakpointTable:
    """Quantiles beta_k = Phi^-1(k/a), k = 1..a-1, of the standard normal."""
    if not isinstance(a, (int, np.integer)) or not 2 <= a <= 26:
        raise AlphabetError(f"alphabet size must be an integer in [2, 26], got {a!r}")
    return _cached_breakpoints(int(a))


def symbol_codes(coefficients: np.ndarray, table: BreakpointTable) -> np.ndarray:
    """Map coefficients to 0-based symbol indices; ties go to the higher symbol."""
    return np.searchsorted(table.betas, coefficients, side="right").astype(np.uint8)


def codes_to_text(codes: np.ndarray) -> str:
    return (codes.astype(np.uint8) + _ORD_A).tobytes().decode("ascii")


def discretize(vec: PaaVector, table: BreakpointTable) -> SaxWord:
    """Quantize a frame-mean vector into a word over the table's alphabet."""
    codes = symbol_codes(vec.coefficients, table)
    return SaxWord(codes_to_text(codes), n=vec.n, a=table.alphabet_size)


def sax(
    series: TimeSeries,
    w: int,
    a: int,
    epsilon_std: float = DEFAULT_EPSILON_STD,
) -> SaxWord:
    """Full pipeline for one series: z-normalize, reduce to w frames, quantize.

    Same result as composing znormalize/paa/discretize by hand, without
    rebuilding the intermediate series object.
    """
    table = breakpoints(a)
    z, _ = znormalize_rows(series.values[None, :], epsilon_std)
    return discretize(paa(z[0], w), table)


def symbol_distance(r: int, c: int, table: BreakpointTable) -> float:
    """Distance between two symbol indices: zero within one step, else the
    gap between the breakpoints separating them."""
    a = table.alphabet_size
    if not (0 <= r < a and 0 <= c < a):
        raise SymbolError(f"symbol indices ({r}, {c}) outside alphabet of size {a}")
    if abs(r - c) <= 1:
        return 0.0
    lo, hi = min(r, c), max(r, c)
    return float(table.betas[hi - 1] - table.betas[lo])


def distance_matrix(table: BreakpointTable) -> np.ndarray:
    """Full (a, a) symbol-distance matrix for vectorized word comparisons."""
    a = table.alphabet_size
    idx = np.arange(a)
    lo = np.minimum.outer(idx, idx)
    hi = np.maximum.outer(idx, idx)
    cells = table.betas[np.maximum(hi - 1, 0)] - table.betas[np.minimum(lo, a - 2)]
    cells[hi - lo <= 1] = 0.0
    return cells


def mindist(u: SaxWord, v: SaxWord) -> float:
    """Lower-bounding distance between two words with identical (n, w, a).

    sqrt(n/w) times the Euclidean norm of the per-position symbol distances;
    never exceeds the Euclidean distance between the z-normalized sources.
    """
    if u.params != v.params:
        raise WordMismatchError(
            f"cannot compare words with parameters {u.params} and {v.params}"
        )
    cells = distance_matrix(breakpoints(u.a))[u.indices(), v.indices()]
    return float(np.sqrt(u.n / u.w) * np.sqrt((cells * cells).sum()))
