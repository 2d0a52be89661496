"""Piecewise aggregate approximation and its piecewise-constant inverse.

An n-point series is reduced to w frame means. Frame edges that fall inside
a sample split that sample's contribution between the two frames in
proportion to overlap, so any 1 <= w <= n is accepted; the divisible case
reduces to plain segment means. Overlap bookkeeping is done on integers
(positions scaled by w, frames scaled by n) to keep weights exact.
"""

from dataclasses import dataclass

import numpy as np

from .errors import PartitionError, ValidationError

__all__ = ["PaaVector", "paa", "paa_rows", "paa_reconstruct", "reconstruction_error"]


@dataclass(frozen=True)
class PaaVector:
    """w frame means of an n-point series; w is implied by the coefficients."""

    coefficients: np.ndarray
    n: int

    def __post_init__(self):
        coeffs = np.ascontiguousarray(self.coefficients, dtype=np.float64)
        if coeffs.ndim != 1 or len(coeffs) == 0:
            raise ValidationError("coefficients must be a non-empty 1-D array")
        if len(coeffs) > self.n:
            raise ValidationError(
                f"{len(coeffs)} coefficients cannot come from {self.n} samples"
            )
        if not np.all(np.isfinite(coeffs)):
            raise ValidationError("coefficients must be finite")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def w(self) -> int:
        return len(self.coefficients)


def _sample_frame_overlaps(n: int, w: int):
    """Per-sample frame assignment in scaled-integer units.

    Sample j spans [j*w, (j+1)*w) and frame i spans [i*n, (i+1)*n); with
    w <= n each sample overlaps at most the two frames f0, f1. Returns
    (f0, overlap0, f1, overlap1) where overlap1 is zero when f1 == f0.
    """
    j = np.arange(n, dtype=np.int64)
    start = j * w
    end = start + w
    f0 = start // n
    f1 = (end - 1) // n
    ov0 = np.minimum(end, (f0 + 1) * n) - start
    ov1 = np.where(f1 > f0, end - f1 * n, 0)
    return f0, ov0, f1, ov1


def paa_rows(values: np.ndarray, w: int) -> np.ndarray:
    """Reduce each row of an (m, n) array to w frame means.

    Single vectorized pass over the input; used both for one-off series and
    for whole-cube symbolization.
    """
    values = np.asarray(values, dtype=np.float64)
    m, n = values.shape
    if w < 1 or w > n:
        raise PartitionError(f"cannot reduce {n} samples to {w} frames")
    if not np.all(np.isfinite(values)):
        raise ValidationError("values must be finite")
    if w == n:
        return values.copy()
    if n % w == 0:
        return values.reshape(m, w, n // w).mean(axis=2)
    f0, ov0, f1, ov1 = _sample_frame_overlaps(n, w)
    acc = np.zeros((w, m))
    np.add.at(acc, f0, ov0[:, None] * values.T)
    split = ov1 > 0
    np.add.at(acc, f1[split], ov1[split, None] * values.T[split])
    return acc.T / n  # each frame holds n scaled units of mass


def paa(values, w: int) -> PaaVector:
    """Reduce an n-point series to its w-dimensional frame-mean vector."""
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 1:
        raise ValidationError("values must be one-dimensional")
    return PaaVector(paa_rows(values[None, :], w)[0], n=len(values))


def paa_reconstruct(vec: PaaVector) -> np.ndarray:
    """Expand frame means back to a piecewise-constant series of length n.

    A sample split between two frames takes the overlap-weighted blend of
    both coefficients.
    """
    coeffs, n, w = vec.coefficients, vec.n, vec.w
    if w == n:
        return coeffs.copy()
    if n % w == 0:
        return np.repeat(coeffs, n // w)
    f0, ov0, f1, ov1 = _sample_frame_overlaps(n, w)
    return (ov0 * coeffs[f0] + ov1 * coeffs[f1]) / w


def reconstruction_error(values, w: int) -> float:
    """Euclidean norm of the residual after a round trip through w frames.

    Zero when w == n or the series is constant; non-increasing as frames are
    refined along a divisor chain.
    """
    values = np.asarray(values, dtype=np.float64)
    return float(np.linalg.norm(values - paa_reconstruct(paa(values, w))))
