"""K-fold cross-validation with per-fold loss weighting.

Folds are disjoint, exhaustive, and near-equal (sizes differ by at most
one). The plain estimate averages the k fold losses; the weighted
variant scales fold i by lambda_i / k, and keeping the weights summing
to k preserves unbiasedness while letting the weights shift variance
between folds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import ValidationError
from .estimator import fit, loss
from .rng import RngStream
from .sampling import FRACTION_RANGE, draw_partition_fraction, srs_sample

__all__ = [
    "FoldPlan",
    "LambdaWeights",
    "KfcvEstimate",
    "make_folds",
    "kfold_losses",
    "empirical_kfold_loss",
    "weighted_kfold_loss",
    "repeated_kfcv",
]

_SUM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class FoldPlan:
    """A partition of range(total) into k disjoint folds."""

    folds: tuple[np.ndarray, ...]
    k: int

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValidationError(f"k must be >= 2, got {self.k}")
        if len(self.folds) != self.k:
            raise ValidationError(
                f"expected {self.k} folds, got {len(self.folds)}"
            )
        sizes = [len(f) for f in self.folds]
        if min(sizes) < 1:
            raise ValidationError("every fold must be non-empty")
        if max(sizes) - min(sizes) > 1:
            raise ValidationError(
                f"fold sizes may differ by at most 1, got {sizes}"
            )
        merged = np.concatenate(self.folds)
        if len(np.unique(merged)) != len(merged):
            raise ValidationError("folds must be disjoint")
        if merged.min() != 0 or merged.max() != len(merged) - 1:
            raise ValidationError(
                "folds must exactly cover range(total)"
            )
        for f in self.folds:
            f.setflags(write=False)

    @property
    def total(self) -> int:
        return sum(len(f) for f in self.folds)

    def complement(self, i: int) -> np.ndarray:
        """All indices outside fold i (the training split)."""
        if not 0 <= i < self.k:
            raise ValidationError(f"fold index {i} out of range(0, {self.k})")
        return np.concatenate(
            [f for j, f in enumerate(self.folds) if j != i]
        )


def make_folds(sample_size: int, k: int, stream: RngStream) -> FoldPlan:
    """Shuffle range(sample_size) and split it into k near-equal folds.

    Earlier folds take the remainder, so sizes are ceil then floor.
    """
    if k < 2:
        raise ValidationError(f"k must be >= 2, got {k}")
    if sample_size < k:
        raise ValidationError(
            f"need sample_size >= k, got sample_size={sample_size}, k={k}"
        )
    perm = stream.generator.permutation(sample_size)
    parts = np.array_split(perm, k)
    return FoldPlan(folds=tuple(parts), k=k)


def kfold_losses(sample: np.ndarray, plan: FoldPlan) -> np.ndarray:
    """Loss of the model fit on each fold's complement, scored on the fold.

    Requires every training complement to hold at least 2 points.
    """
    sample = np.asarray(sample, dtype=np.float64)
    if sample.ndim != 1 or len(sample) != plan.total:
        raise ValidationError(
            f"sample must be a length-{plan.total} vector, "
            f"got shape {sample.shape}"
        )
    out = np.empty(plan.k, dtype=np.float64)
    for i, fold in enumerate(plan.folds):
        train = sample[plan.complement(i)]
        if len(train) < 2:
            raise ValidationError(
                f"training complement of fold {i} has {len(train)} "
                "points, need at least 2"
            )
        out[i] = loss(fit(train), sample[fold])
    return out


def empirical_kfold_loss(losses: np.ndarray) -> float:
    """Unweighted mean of the per-fold losses."""
    losses = np.asarray(losses, dtype=np.float64)
    if losses.ndim != 1 or len(losses) < 1:
        raise ValidationError("losses must be a non-empty vector")
    return float(losses.mean())


@dataclass(frozen=True, eq=False)
class LambdaWeights:
    """Per-fold loss weights lambda_1..lambda_k.

    With ``unbiased=True`` (the default) the weights must sum to k, the
    condition under which the weighted loss keeps the plain estimate's
    expectation. Weights must be finite and non-negative; zero weights
    are allowed and simply drop a fold from the average.
    """

    lambdas: np.ndarray
    unbiased: bool = True

    def __post_init__(self) -> None:
        arr = np.asarray(self.lambdas, dtype=np.float64)
        object.__setattr__(self, "lambdas", arr)
        if arr.ndim != 1 or len(arr) < 1:
            raise ValidationError("lambdas must be a non-empty vector")
        if not np.isfinite(arr).all() or (arr < 0).any():
            raise ValidationError(
                "lambdas must be finite and non-negative"
            )
        if self.unbiased and abs(arr.sum() - len(arr)) > _SUM_TOL:
            raise ValidationError(
                f"unbiased weights must sum to k={len(arr)}, "
                f"got {arr.sum()!r}"
            )
        arr.setflags(write=False)

    @classmethod
    def uniform(cls, k: int) -> "LambdaWeights":
        if k < 1:
            raise ValidationError(f"k must be >= 1, got {k}")
        return cls(lambdas=np.ones(k))

    @property
    def k(self) -> int:
        return len(self.lambdas)


def weighted_kfold_loss(losses: np.ndarray, weights: LambdaWeights) -> float:
    """(1/k) * sum_i lambda_i * loss_i.

    Computed as the mean of the elementwise products, so uniform weights
    reproduce :func:`empirical_kfold_loss` bit for bit.
    """
    losses = np.asarray(losses, dtype=np.float64)
    if losses.ndim != 1 or len(losses) != weights.k:
        raise ValidationError(
            f"losses must be a length-{weights.k} vector, "
            f"got shape {losses.shape}"
        )
    return float((weights.lambdas * losses).mean())


@dataclass(frozen=True)
class KfcvEstimate:
    """Averages over repetitions of a full sample-and-validate pass."""

    mean_estimate: float
    var_estimate: float
    loss: float
    repetitions: int
    k: int


def repeated_kfcv(
    data: Dataset,
    k: int,
    repetitions: int,
    weights: LambdaWeights,
    stream: RngStream,
    fraction_range: tuple[float, float] = FRACTION_RANGE,
) -> KfcvEstimate:
    """Repeat (draw fraction, subsample, split, validate) and average.

    Each repetition draws a fresh partition fraction f, subsamples
    round(f*n) points, builds a fold plan, and records the weighted
    k-fold loss plus the per-fold training-complement mean and variance.
    The returned estimates average over all repetitions and folds.
    """
    if repetitions < 1:
        raise ValidationError(
            f"repetitions must be >= 1, got {repetitions}"
        )
    if weights.k != k:
        raise ValidationError(
            f"weights have k={weights.k}, expected {k}"
        )
    mean_acc = 0.0
    var_acc = 0.0
    loss_acc = 0.0
    for _ in range(repetitions):
        f = draw_partition_fraction(stream, *fraction_range)
        m = int(round(f * data.n))
        view = srs_sample(data, m, stream)
        sample = data.values[view.indices]
        plan = make_folds(m, k, stream)
        fold_losses = np.empty(k, dtype=np.float64)
        for i, fold in enumerate(plan.folds):
            params = fit(sample[plan.complement(i)])
            fold_losses[i] = loss(params, sample[fold])
            mean_acc += params.fitted_mean
            var_acc += params.fitted_var
        loss_acc += weighted_kfold_loss(fold_losses, weights)
    scale = repetitions * k
    return KfcvEstimate(
        mean_estimate=mean_acc / scale,
        var_estimate=var_acc / scale,
        loss=loss_acc / repetitions,
        repetitions=repetitions,
        k=k,
    )
