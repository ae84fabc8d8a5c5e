"""Variance budgets and concentration bounds for the hybrid scheme.

The hybrid estimator averages T independent subsample-and-validate
iterations, so its variance is the per-iteration budget divided by T.
The per-iteration budget adds a subsampling component, which carries a
finite population correction, to a fold-averaging component. Chebyshev
gives a distribution-free tail bound on the deviation of the compounded
measure; Hoeffding sharpens it when losses live in a known interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .errors import ValidationError

__all__ = [
    "VarianceBudget",
    "TailBound",
    "srs_variance_component",
    "kfcv_variance_component",
    "hybrid_variance",
    "chebyshev_tail",
    "chebyshev_threshold",
    "hoeffding_tail",
]

_BUDGET_TOL = 1e-12


@dataclass(frozen=True)
class VarianceBudget:
    """Per-iteration variance split and its per-T total."""

    srs_component: float
    kfcv_component: float
    total_per_t: float
    iterations: int

    def __post_init__(self) -> None:
        if self.srs_component < 0 or self.kfcv_component < 0:
            raise ValidationError("variance components must be >= 0")
        if self.iterations < 1:
            raise ValidationError(
                f"iterations must be >= 1, got {self.iterations}"
            )
        expected = (
            self.srs_component + self.kfcv_component
        ) / self.iterations
        if abs(self.total_per_t - expected) > _BUDGET_TOL:
            raise ValidationError(
                f"total_per_t {self.total_per_t!r} does not match "
                f"(srs + kfcv)/T = {expected!r}"
            )


def srs_variance_component(sigma2: float, n: int, population_n: int) -> float:
    """Variance of a size-n subsample mean: (sigma2/n)(1 - n/N).

    The finite population correction (1 - n/N) vanishes at n = N, where
    the subsample is the whole population.
    """
    if not sigma2 > 0:
        raise ValidationError(f"sigma2 must be > 0, got {sigma2}")
    if not 1 <= n <= population_n:
        raise ValidationError(
            f"need 1 <= n <= N, got n={n}, N={population_n}"
        )
    return (sigma2 / n) * (1.0 - n / population_n)


def kfcv_variance_component(fold_variances: Iterable[float]) -> float:
    """Mean of the per-fold loss variances: (1/k) sum_i Var(L_i)."""
    vals = [float(v) for v in fold_variances]
    if not vals:
        raise ValidationError("fold_variances must be non-empty")
    if any(not math.isfinite(v) or v < 0 for v in vals):
        raise ValidationError(
            "fold_variances must be finite and >= 0"
        )
    return sum(vals) / len(vals)


def hybrid_variance(
    sigma2: float,
    n: int,
    population_n: int,
    fold_variances: Iterable[float],
    iterations: int,
) -> VarianceBudget:
    """Assemble the variance budget of the T-iteration average.

    Per iteration the subsampling and fold components add; averaging T
    independent iterations divides the sum by T.
    """
    if iterations < 1:
        raise ValidationError(
            f"iterations must be >= 1, got {iterations}"
        )
    srs = srs_variance_component(sigma2, n, population_n)
    kf = kfcv_variance_component(fold_variances)
    return VarianceBudget(
        srs_component=srs,
        kfcv_component=kf,
        total_per_t=(srs + kf) / iterations,
        iterations=iterations,
    )


def chebyshev_tail(k_dev: float) -> float:
    """P(|X - EX| >= k_dev * sd) <= min(1, 1/k_dev^2)."""
    if not k_dev > 0:
        raise ValidationError(f"k_dev must be > 0, got {k_dev}")
    return min(1.0, 1.0 / (k_dev * k_dev))


def chebyshev_threshold(
    sigma_hyb2: float, iterations: int, k_dev: float
) -> float:
    """Deviation threshold k_dev * sqrt(sigma_hyb2 / T) for the T-average."""
    if not sigma_hyb2 >= 0:
        raise ValidationError(
            f"sigma_hyb2 must be >= 0, got {sigma_hyb2}"
        )
    if iterations < 1:
        raise ValidationError(
            f"iterations must be >= 1, got {iterations}"
        )
    if not k_dev > 0:
        raise ValidationError(f"k_dev must be > 0, got {k_dev}")
    return k_dev * math.sqrt(sigma_hyb2 / iterations)


class TailBound(NamedTuple):
    """A raw bound value and its probability-capped counterpart."""

    raw: float
    capped: float


def hoeffding_tail(
    epsilon: float, iterations: int, a: float, b: float
) -> TailBound:
    """Two-sided Hoeffding bound for the mean of T losses in [a, b].

    P(|mean - E mean| >= epsilon) <= 2 exp(-2 T epsilon^2 / (b-a)^2).
    The raw value exceeds 1 for loose epsilon (it is 2 at epsilon = 0);
    ``capped`` clamps it to 1 for use as a probability.
    """
    if not epsilon >= 0:
        raise ValidationError(
            f"epsilon must be >= 0, got {epsilon}"
        )
    if iterations < 1:
        raise ValidationError(
            f"iterations must be >= 1, got {iterations}"
        )
    if not b > a:
        raise ValidationError(f"need b > a, got [{a}, {b}]")
    width = b - a
    raw = 2.0 * math.exp(
        -2.0 * iterations * epsilon * epsilon / (width * width)
    )
    return TailBound(raw=raw, capped=min(1.0, raw))
