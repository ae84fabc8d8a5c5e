"""Simple random sampling without replacement.

Draws a uniform size-m subset of a dataset's indices, exposes the
inclusion-count moments of the scheme, and draws the random partition
fraction used by the experiment protocol.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import ValidationError
from .rng import RngStream

__all__ = [
    "FRACTION_RANGE",
    "SampleView",
    "srs_sample",
    "sample_values",
    "holdout_values",
    "inclusion_moments",
    "draw_partition_fraction",
]

# default partition-fraction window for all experiments
FRACTION_RANGE = (0.60, 0.90)


@dataclass(frozen=True, eq=False)
class SampleView:
    """Indices of one drawn subset, in canonical sorted order."""

    indices: np.ndarray
    m: int
    source_n: int

    def __post_init__(self) -> None:
        if not 1 <= self.m <= self.source_n:
            raise ValidationError(
                f"need 1 <= m <= source_n, got m={self.m}, "
                f"source_n={self.source_n}"
            )
        if self.indices.ndim != 1 or len(self.indices) != self.m:
            raise ValidationError(
                f"indices must be a length-{self.m} vector"
            )
        diffs = np.diff(self.indices)
        if len(diffs) and not (diffs > 0).all():
            raise ValidationError("indices must be strictly increasing")
        if self.indices[0] < 0 or self.indices[-1] >= self.source_n:
            raise ValidationError(
                f"indices must lie in [0, {self.source_n})"
            )
        self.indices.setflags(write=False)


def srs_sample(data: Dataset, m: int, stream: RngStream) -> SampleView:
    """Draw a uniform random m-subset of ``data``'s indices.

    Every index has inclusion probability m/n and every size-m subset is
    equally likely. Indices are returned sorted ascending.
    """
    if not 1 <= m <= data.n:
        raise ValidationError(
            f"need 1 <= m <= n, got m={m}, n={data.n}"
        )
    picked = stream.generator.choice(data.n, size=m, replace=False, shuffle=False)
    picked.sort()
    return SampleView(indices=picked, m=m, source_n=data.n)


def sample_values(data: Dataset, view: SampleView) -> np.ndarray:
    """Values of the sampled subset."""
    if view.source_n != data.n:
        raise ValidationError(
            f"view was drawn from n={view.source_n}, dataset has n={data.n}"
        )
    return data.values[view.indices]


def holdout_values(data: Dataset, view: SampleView) -> np.ndarray:
    """Values of the unsampled complement (empty when m = n)."""
    if view.source_n != data.n:
        raise ValidationError(
            f"view was drawn from n={view.source_n}, dataset has n={data.n}"
        )
    mask = np.ones(data.n, dtype=bool)
    mask[view.indices] = False
    return data.values[mask]


def inclusion_moments(n: int, m: int) -> tuple[float, float]:
    """Inclusion moments of size-m SRS over n indices.

    Each index enters the sample with probability m/n, so the expected
    inclusion total is m and the summed marginal indicator variance is
    m(1 - m/n). The variance term vanishes at m = n, where inclusion is
    certain; it is the finite-population correction factor the variance
    budget builds on.
    """
    if not 1 <= m <= n:
        raise ValidationError(f"need 1 <= m <= n, got m={m}, n={n}")
    return float(m), float(m) * (1.0 - m / n)


def draw_partition_fraction(
    stream: RngStream,
    low: float = FRACTION_RANGE[0],
    high: float = FRACTION_RANGE[1],
) -> float:
    """Draw the train-partition fraction uniformly from [low, high)."""
    if not 0.0 < low < high <= 1.0:
        raise ValidationError(
            f"need 0 < low < high <= 1, got [{low}, {high}]"
        )
    return float(stream.generator.uniform(low, high))
