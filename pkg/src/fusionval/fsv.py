"""Fusion sampling validation.

One run repeats the subsample-then-cross-validate trial T times on the
same dataset and compounds the T mean fold losses into a single measure
L* = alpha * (1/T) * sum_t L_t. Averaging over T iterations divides the
sampling variance by T; the alpha factor (0.95 by default) shrinks the
headline number conservatively. Both the compounded measure and the raw
iteration mean are exposed, since alpha < 1 trades a small downward bias
for that conservatism.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import ValidationError
from .estimator import fit, loss
from .kfold import kfold_losses, make_folds
from .metrics import TrialMetrics, trial_metrics
from .rng import RngStream
from .sampling import (
    FRACTION_RANGE,
    draw_partition_fraction,
    holdout_values,
    sample_values,
    srs_sample,
)

__all__ = [
    "DEFAULT_ALPHA",
    "FsvConfig",
    "SampledTrial",
    "FsvResult",
    "sampled_kfold_trial",
    "compound_measure",
    "fsv_run",
]

DEFAULT_ALPHA = 0.95
_COMPOUND_TOL = 1e-12


@dataclass(frozen=True)
class FsvConfig:
    """Run parameters.

    ``sample_size=None`` draws a fresh partition fraction from
    ``fraction_range`` each iteration; a fixed integer pins the subsample
    size instead.
    """

    iterations: int
    alpha: float = DEFAULT_ALPHA
    k: int = 5
    sample_size: int | None = None
    fraction_range: tuple[float, float] = FRACTION_RANGE

    def __post_init__(self) -> None:
        if self.iterations < 1:
            raise ValidationError(
                f"iterations must be >= 1, got {self.iterations}"
            )
        if not 0.0 < self.alpha <= 1.0:
            raise ValidationError(
                f"alpha must be in (0, 1], got {self.alpha}"
            )
        if self.alpha < 0.8:
            warnings.warn(
                f"alpha={self.alpha} is far below 1; the compounded "
                "measure will be strongly shrunk",
                stacklevel=2,
            )
        if self.k < 2:
            raise ValidationError(f"k must be >= 2, got {self.k}")
        if self.sample_size is not None and self.sample_size < self.k:
            raise ValidationError(
                f"sample_size must be >= k, got {self.sample_size}"
            )


@dataclass(frozen=True, eq=False)
class SampledTrial:
    """One subsample-then-cross-validate pass.

    ``fraction`` is None when the subsample size was pinned rather than
    drawn. ``holdout_mse`` is the fitted model's loss on the unsampled
    complement (None when the sample exhausts the dataset).
    """

    fraction: float | None
    m: int
    sample_mean: float
    sample_var: float
    holdout_mse: float | None
    fold_losses: np.ndarray

    @property
    def mean_fold_loss(self) -> float:
        return float(self.fold_losses.mean())


def sampled_kfold_trial(
    data: Dataset,
    k: int,
    stream: RngStream,
    *,
    folds_stream: RngStream | None = None,
    fraction_stream: RngStream | None = None,
    sample_size: int | None = None,
    fraction_range: tuple[float, float] = FRACTION_RANGE,
) -> SampledTrial:
    """Draw one subsample, cross-validate it, score the holdout.

    ``stream`` drives the subsample draw; fold shuffling and the
    fraction draw use their own streams when given, falling back to
    ``stream`` so single-stream callers stay deterministic. The sample
    statistics come from the whole subsample (mean, ddof=1 variance);
    the holdout loss scores the subsample-fitted model on the rest of
    the dataset.
    """
    fraction: float | None = None
    if sample_size is None:
        fraction = draw_partition_fraction(
            fraction_stream or stream, *fraction_range
        )
        m = int(round(fraction * data.n))
    else:
        m = sample_size
    if not k <= m <= data.n:
        raise ValidationError(
            f"need k <= m <= n, got m={m}, k={k}, n={data.n}"
        )
    view = srs_sample(data, m, stream)
    sample = sample_values(data, view)
    params = fit(sample)
    rest = holdout_values(data, view)
    holdout_mse = loss(params, rest) if len(rest) else None
    plan = make_folds(m, k, folds_stream or stream)
    fold_losses = kfold_losses(sample, plan)
    return SampledTrial(
        fraction=fraction,
        m=m,
        sample_mean=params.fitted_mean,
        sample_var=params.fitted_var,
        holdout_mse=holdout_mse,
        fold_losses=fold_losses,
    )


def compound_measure(iteration_losses: np.ndarray, alpha: float) -> float:
    """alpha times the mean of the per-iteration losses."""
    losses = np.asarray(iteration_losses, dtype=np.float64)
    if losses.ndim != 1 or len(losses) < 1:
        raise ValidationError(
            "iteration_losses must be a non-empty vector"
        )
    if not alpha > 0:
        raise ValidationError(f"alpha must be > 0, got {alpha}")
    return float(alpha * losses.mean())


@dataclass(frozen=True, eq=False)
class FsvResult:
    """Outcome of one run.

    ``iteration_losses`` holds the raw (unscaled) mean fold loss of each
    iteration; ``iteration_metrics`` holds the alpha-scaled metric rows
    the summary tables report. ``compounded_measure`` always equals
    alpha times the mean of ``iteration_losses``.
    """

    compounded_measure: float
    iteration_losses: np.ndarray
    iteration_metrics: tuple[TrialMetrics, ...]
    alpha: float
    k: int

    def __post_init__(self) -> None:
        if len(self.iteration_losses) != len(self.iteration_metrics):
            raise ValidationError(
                "iteration_losses and iteration_metrics lengths differ"
            )
        expected = compound_measure(self.iteration_losses, self.alpha)
        if abs(self.compounded_measure - expected) > _COMPOUND_TOL:
            raise ValidationError(
                f"compounded_measure {self.compounded_measure!r} does "
                f"not match alpha * mean(iteration_losses) {expected!r}"
            )
        self.iteration_losses.setflags(write=False)

    @property
    def iterations(self) -> int:
        return len(self.iteration_losses)

    @property
    def mean_iteration_loss(self) -> float:
        """Raw iteration mean, without the alpha shrinkage."""
        return float(self.iteration_losses.mean())


def fsv_run(data: Dataset, config: FsvConfig, stream: RngStream) -> FsvResult:
    """Run T subsample-and-validate iterations and compound the losses."""
    if data.n < 2 * config.k:
        raise ValidationError(
            f"need data.n >= 2k, got n={data.n}, k={config.k}"
        )
    if config.sample_size is not None and config.sample_size >= data.n:
        raise ValidationError(
            "sample_size must leave a non-empty holdout, got "
            f"{config.sample_size} of n={data.n}"
        )
    losses = np.empty(config.iterations, dtype=np.float64)
    rows = []
    for t in range(config.iterations):
        trial = sampled_kfold_trial(
            data,
            config.k,
            stream,
            sample_size=config.sample_size,
            fraction_range=config.fraction_range,
        )
        if trial.holdout_mse is None:
            raise ValidationError(
                "iteration subsample exhausted the dataset; shrink "
                "fraction_range or sample_size"
            )
        losses[t] = trial.mean_fold_loss
        raw = trial_metrics(
            trial.sample_mean,
            trial.sample_var,
            trial.holdout_mse,
            data.true_mean,
            data.true_var,
            float(trial.fold_losses[0]),
        )
        rows.append(raw.scaled(config.alpha))
    return FsvResult(
        compounded_measure=compound_measure(losses, config.alpha),
        iteration_losses=losses,
        iteration_metrics=tuple(rows),
        alpha=config.alpha,
        k=config.k,
    )
