"""Exception taxonomy shared by all modules.

Everything derives from SitsaxError (itself a ValueError) so callers can
catch broadly; the CLI maps the subclasses to distinct exit codes.
"""

__all__ = [
    "SitsaxError",
    "ValidationError",
    "PartitionError",
    "AlphabetError",
    "SymbolError",
    "WordMismatchError",
    "ShapeError",
    "MissingDataError",
    "CubeFormatError",
]


class SitsaxError(ValueError):
    """Base class for all domain errors raised by this package."""


class ValidationError(SitsaxError):
    """Input data violates a structural invariant (ordering, finiteness, range)."""


class PartitionError(SitsaxError):
    """Invalid episode/frame split: segment count is zero or exceeds the series length."""


class AlphabetError(SitsaxError):
    """Alphabet size outside the supported [2, 26] range."""


class SymbolError(SitsaxError):
    """Symbol index outside the alphabet."""


class WordMismatchError(SitsaxError):
    """Operands disagree on (n, w, a) and cannot be compared."""


class ShapeError(SitsaxError):
    """Array dimensions disagree."""


class MissingDataError(SitsaxError):
    """A pixel series cannot be produced under the active fill policy."""


class CubeFormatError(SitsaxError):
    """A cube, raster, manifest, or probe file does not parse."""
