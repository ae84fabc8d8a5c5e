"""Experiment runner: the study grid, trial execution, and report emission.

One run sweeps a grid of dataset sizes and trial counts. In the cell
(n, t) each of the t trials regenerates its dataset from a derived
stream, then runs the three methods:

* SRS: one subsample, fit, hold-out scoring.
* KFCV: repeated subsample-and-cross-validate, averaged.
* FSV: an independent subsample-and-cross-validate pass whose metrics
  are alpha-scaled; the cell's t raw iteration losses compound into L*.

Every random draw comes from a stream derived from (base seed, trial
key, purpose), so trials are order-independent and the report is
byte-identical under any worker count. The trial key hashes the cell
coordinates, which keeps cells independent of grid composition: running
one cell alone reproduces its slice of the full grid.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .data import generate_dataset
from .errors import ValidationError
from .fsv import compound_measure, sampled_kfold_trial
from .kfold import LambdaWeights, repeated_kfcv
from .metrics import (
    METRIC_FIELDS,
    Aggregate,
    Method,
    MethodSummary,
    TrialMetrics,
    summarize,
    trial_metrics,
)
from .rng import Purpose, derive_stream
from .sampling import FRACTION_RANGE

__all__ = [
    "ExperimentConfig",
    "CellResult",
    "ExperimentReport",
    "run_experiment",
    "emit_markdown_table",
    "emit_csv",
    "emit_json",
    "emit_plotdata",
    "report_to_dict",
    "report_from_dict",
]

REPORT_VERSION = "0.1.0"

DEFAULT_SIZES = (10_000, 50_000, 100_000)
DEFAULT_TRIALS = (10, 50, 100)

_METHOD_ORDER = (Method.SRS, Method.KFCV, Method.FSV)
_METRIC_LABELS = {
    "mean_est": "Mean est.",
    "var_est": "Var est.",
    "mse": "MSE",
    "bias": "Bias",
    "roc_me": "ROC Mean est.",
    "roc_ve": "ROC Var est.",
}
_METHOD_LABELS = {Method.SRS: "SRS", Method.KFCV: "KF", Method.FSV: "FSV"}


@dataclass(frozen=True)
class ExperimentConfig:
    """Full study configuration; the defaults are the reference protocol."""

    sizes: tuple[int, ...] = DEFAULT_SIZES
    trials: tuple[int, ...] = DEFAULT_TRIALS
    k: int = 5
    repetitions: int = 10
    alpha: float = 0.95
    lambdas: tuple[float, ...] | None = None
    seed: int = 42
    fraction_range: tuple[float, float] = FRACTION_RANGE
    mu: float = 0.0
    sigma2: float = 1.0
    shared_streams: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "sizes", tuple(int(n) for n in self.sizes))
        object.__setattr__(self, "trials", tuple(int(t) for t in self.trials))
        if self.lambdas is not None:
            object.__setattr__(
                self, "lambdas", tuple(float(x) for x in self.lambdas)
            )
        if not self.sizes:
            raise ValidationError("sizes must be non-empty")
        if not self.trials or any(t < 1 for t in self.trials):
            raise ValidationError("trials must be non-empty, all >= 1")
        if self.k < 2:
            raise ValidationError(f"k must be >= 2, got {self.k}")
        if self.repetitions < 1:
            raise ValidationError(
                f"repetitions must be >= 1, got {self.repetitions}"
            )
        if not 0.0 < self.alpha <= 1.0:
            raise ValidationError(
                f"alpha must be in (0, 1], got {self.alpha}"
            )
        if self.lambdas is not None and len(self.lambdas) != self.k:
            raise ValidationError(
                f"lambdas must have length k={self.k}, "
                f"got {len(self.lambdas)}"
            )
        if self.seed < 0:
            raise ValidationError(f"seed must be >= 0, got {self.seed}")
        low, high = self.fraction_range
        if not 0.0 < low < high <= 1.0:
            raise ValidationError(
                f"fraction_range must satisfy 0 < low < high <= 1, "
                f"got {self.fraction_range}"
            )
        if not self.sigma2 > 0:
            raise ValidationError(
                f"sigma2 must be > 0, got {self.sigma2}"
            )
        for n in self.sizes:
            if int(round(low * n)) < self.k:
                raise ValidationError(
                    f"size {n} is too small: the smallest subsample "
                    f"round({low}*{n}) holds fewer than k={self.k} points"
                )
            if int(round(high * n)) >= n:
                raise ValidationError(
                    f"size {n} is too small: the largest subsample "
                    f"leaves no holdout"
                )

    def weights(self) -> LambdaWeights:
        if self.lambdas is None:
            return LambdaWeights.uniform(self.k)
        return LambdaWeights(lambdas=np.array(self.lambdas))

    def to_dict(self) -> dict:
        return {
            "sizes": list(self.sizes),
            "trials": list(self.trials),
            "k": self.k,
            "repetitions": self.repetitions,
            "alpha": self.alpha,
            "lambdas": list(self.lambdas) if self.lambdas else None,
            "seed": self.seed,
            "fraction_range": list(self.fraction_range),
            "mu": self.mu,
            "sigma2": self.sigma2,
            "shared_streams": self.shared_streams,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        return cls(
            sizes=tuple(d["sizes"]),
            trials=tuple(d["trials"]),
            k=d["k"],
            repetitions=d["repetitions"],
            alpha=d["alpha"],
            lambdas=tuple(d["lambdas"]) if d.get("lambdas") else None,
            seed=d["seed"],
            fraction_range=tuple(d["fraction_range"]),
            mu=d["mu"],
            sigma2=d["sigma2"],
            shared_streams=d["shared_streams"],
        )

    def config_hash(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _trial_key(n: int, t_total: int, trial: int) -> int:
    """48-bit trial key hashed from the cell coordinates.

    Keying on (n, t_total, trial) rather than a running counter makes
    every cell's trials reproducible in isolation and statistically
    independent across cells.
    """
    digest = hashlib.sha256(f"{n}:{t_total}:{trial}".encode()).digest()
    return int.from_bytes(digest[:6], "big")


@dataclass(frozen=True)
class TrialOutcome:
    trial: int
    srs: TrialMetrics
    kfcv: TrialMetrics
    fsv: TrialMetrics
    fsv_raw_loss: float


def _run_trial(
    config: ExperimentConfig, n: int, t_total: int, trial: int
) -> TrialOutcome:
    key = _trial_key(n, t_total, trial)

    def stream(purpose: Purpose):
        return derive_stream(config.seed, key, purpose)

    dataset = generate_dataset(n, config.mu, config.sigma2, stream(Purpose.DATA))
    primary = sampled_kfold_trial(
        dataset,
        config.k,
        stream(Purpose.SAMPLE),
        folds_stream=stream(Purpose.FOLDS),
        fraction_stream=stream(Purpose.FRACTION),
        fraction_range=config.fraction_range,
    )
    bias_fold_loss = float(primary.fold_losses[0])
    srs_row = trial_metrics(
        primary.sample_mean,
        primary.sample_var,
        primary.holdout_mse,
        config.mu,
        config.sigma2,
        bias_fold_loss,
    )

    kf = repeated_kfcv(
        dataset,
        config.k,
        config.repetitions,
        config.weights(),
        stream(Purpose.KFCV_DRAWS),
        fraction_range=config.fraction_range,
    )
    kf_row = trial_metrics(
        kf.mean_estimate,
        kf.var_estimate,
        kf.loss,
        config.mu,
        config.sigma2,
        bias_fold_loss,
    )

    if config.shared_streams:
        fsv_trial = primary
        fsv_raw = srs_row
    else:
        fsv_dataset = generate_dataset(
            n, config.mu, config.sigma2, stream(Purpose.FSV_DATA)
        )
        fsv_trial = sampled_kfold_trial(
            fsv_dataset,
            config.k,
            stream(Purpose.FSV_SAMPLE),
            folds_stream=stream(Purpose.FSV_FOLDS),
            fraction_stream=stream(Purpose.FSV_FRACTION),
            fraction_range=config.fraction_range,
        )
        fsv_raw = trial_metrics(
            fsv_trial.sample_mean,
            fsv_trial.sample_var,
            fsv_trial.holdout_mse,
            config.mu,
            config.sigma2,
            float(fsv_trial.fold_losses[0]),
        )
    return TrialOutcome(
        trial=trial,
        srs=srs_row,
        kfcv=kf_row,
        fsv=fsv_raw.scaled(config.alpha),
        fsv_raw_loss=fsv_trial.mean_fold_loss,
    )


def _run_trial_task(args: tuple) -> tuple[int, int, TrialOutcome]:
    config, n, t_total, trial = args
    return n, t_total, _run_trial(config, n, t_total, trial)


@dataclass(frozen=True)
class CellResult:
    """All trials and summaries of one (n, t) grid cell."""

    n: int
    t: int
    trials: dict[str, list[TrialMetrics]]
    summaries: dict[str, MethodSummary]
    fsv_compounded: float
    fsv_iteration_losses: list[float]


@dataclass(frozen=True)
class ExperimentReport:
    config: ExperimentConfig
    cells: list[CellResult] = field(default_factory=list)
    config_hash: str = ""
    version: str = REPORT_VERSION
    wall_time_s: float = 0.0

    def cell(self, n: int, t: int) -> CellResult:
        for c in self.cells:
            if c.n == n and c.t == t:
                return c
        raise ValidationError(f"no cell (n={n}, t={t}) in report")


def _assemble_cell(
    config: ExperimentConfig, n: int, t: int, outcomes: list[TrialOutcome]
) -> CellResult:
    outcomes = sorted(outcomes, key=lambda o: o.trial)
    per_method = {
        Method.SRS.value: [o.srs for o in outcomes],
        Method.KFCV.value: [o.kfcv for o in outcomes],
        Method.FSV.value: [o.fsv for o in outcomes],
    }
    raw_losses = [o.fsv_raw_loss for o in outcomes]
    summaries = {
        m.value: summarize(per_method[m.value], m, n, t)
        for m in _METHOD_ORDER
    }
    return CellResult(
        n=n,
        t=t,
        trials=per_method,
        summaries=summaries,
        fsv_compounded=compound_measure(np.array(raw_losses), config.alpha),
        fsv_iteration_losses=raw_losses,
    )


def run_experiment(
    config: ExperimentConfig, jobs: int | None = None
) -> ExperimentReport:
    """Run the full grid and assemble the report.

    ``jobs`` sizes the worker pool; 1 runs inline, None uses all cores.
    The report is identical for every jobs value.
    """
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs < 1:
        raise ValidationError(f"jobs must be >= 1, got {jobs}")
    started = time.perf_counter()
    tasks = [
        (config, n, t, trial)
        for n in config.sizes
        for t in config.trials
        for trial in range(t)
    ]
    buckets: dict[tuple[int, int], list[TrialOutcome]] = {
        (n, t): [] for n in config.sizes for t in config.trials
    }
    if jobs == 1:
        for task in tasks:
            n, t, outcome = _run_trial_task(task)
            buckets[(n, t)].append(outcome)
    else:
        chunk = max(1, len(tasks) // (jobs * 8))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for n, t, outcome in pool.map(
                _run_trial_task, tasks, chunksize=chunk
            ):
                buckets[(n, t)].append(outcome)
    cells = []
    for n in config.sizes:
        for t in config.trials:
            try:
                cells.append(_assemble_cell(config, n, t, buckets[(n, t)]))
            except Exception as exc:
                raise RuntimeError(f"cell (n={n}, t={t}): {exc}") from exc
    return ExperimentReport(
        config=config,
        cells=cells,
        config_hash=config.config_hash(),
        version=REPORT_VERSION,
        wall_time_s=time.perf_counter() - started,
    )


def emit_markdown_table(report: ExperimentReport, n: int) -> str:
    """Render one size's summary block: 18 rows, mean/min/max per T."""
    cells = [c for c in report.cells if c.n == n]
    if not cells:
        raise ValidationError(f"no cells for n={n} in report")
    for c in cells:
        if not c.trials[Method.SRS.value]:
            raise ValidationError(f"cell (n={n}, t={c.t}) has no trials")
    cells = sorted(cells, key=lambda c: c.t)
    header = ["Statistical Metrics"]
    align = [":--"]
    for c in cells:
        header += [f"{c.t} Trials Mean", "Min", "Max"]
        align += ["--:", "--:", "--:"]
    lines = [
        f"### N = {n:,}",
        "",
        "| " + " | ".join(header) + " |",
        "| " + " | ".join(align) + " |",
    ]
    for metric in METRIC_FIELDS:
        for method in _METHOD_ORDER:
            row = [f"{_METRIC_LABELS[metric]} {_METHOD_LABELS[method]}"]
            for c in cells:
                agg = c.summaries[method.value].stats[metric]
                row += [
                    f"{agg.mean:.4f}",
                    f"{agg.min:.4f}",
                    f"{agg.max:.4f}",
                ]
            lines.append("| " + " | ".join(row) + " |")
    lines.append("")
    for c in cells:
        lines.append(
            f"Compounded measure L* ({c.t} trials): "
            f"{c.fsv_compounded:.4f}"
        )
    return "\n".join(lines) + "\n"


def _trial_rows(report: ExperimentReport):
    for c in report.cells:
        for method in _METHOD_ORDER:
            for i, row in enumerate(c.trials[method.value]):
                for metric in METRIC_FIELDS:
                    yield c.n, c.t, method.value, metric, i, getattr(
                        row, metric
                    )


def emit_csv(report: ExperimentReport, out_dir: str | Path) -> tuple[Path, Path]:
    """Write per-trial and summary CSVs; returns their paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    trials_path = out / "trials.csv"
    with trials_path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["N", "T", "method", "metric", "trial", "value"])
        for n, t, method, metric, i, v in _trial_rows(report):
            w.writerow([n, t, method, metric, i, format(v, ".10g")])
    summary_path = out / "summary.csv"
    with summary_path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["N", "T", "method", "metric", "mean", "min", "max"])
        for c in report.cells:
            for method in _METHOD_ORDER:
                stats = c.summaries[method.value].stats
                for metric in METRIC_FIELDS:
                    agg = stats[metric]
                    w.writerow(
                        [
                            c.n,
                            c.t,
                            method.value,
                            metric,
                            format(agg.mean, ".10g"),
                            format(agg.min, ".10g"),
                            format(agg.max, ".10g"),
                        ]
                    )
    return trials_path, summary_path


def report_to_dict(report: ExperimentReport) -> dict:
    return {
        "config": report.config.to_dict(),
        "config_hash": report.config_hash,
        "version": report.version,
        "wall_time_s": report.wall_time_s,
        "cells": [
            {
                "n": c.n,
                "t": c.t,
                "trials": {
                    method: [
                        {m: getattr(row, m) for m in METRIC_FIELDS}
                        for row in rows
                    ]
                    for method, rows in c.trials.items()
                },
                "summaries": {
                    method: {
                        metric: {
                            "mean": agg.mean,
                            "min": agg.min,
                            "max": agg.max,
                        }
                        for metric, agg in s.stats.items()
                    }
                    for method, s in c.summaries.items()
                },
                "fsv_compounded": c.fsv_compounded,
                "fsv_iteration_losses": c.fsv_iteration_losses,
            }
            for c in report.cells
        ],
    }


def report_from_dict(d: dict) -> ExperimentReport:
    config = ExperimentConfig.from_dict(d["config"])
    cells = []
    for cd in d["cells"]:
        trials = {
            method: [TrialMetrics(**row) for row in rows]
            for method, rows in cd["trials"].items()
        }
        summaries = {
            method: MethodSummary(
                method=Method(method),
                n=cd["n"],
                t=cd["t"],
                stats={
                    metric: Aggregate(**agg)
                    for metric, agg in stats.items()
                },
            )
            for method, stats in cd["summaries"].items()
        }
        cells.append(
            CellResult(
                n=cd["n"],
                t=cd["t"],
                trials=trials,
                summaries=summaries,
                fsv_compounded=cd["fsv_compounded"],
                fsv_iteration_losses=list(cd["fsv_iteration_losses"]),
            )
        )
    return ExperimentReport(
        config=config,
        cells=cells,
        config_hash=d["config_hash"],
        version=d["version"],
        wall_time_s=d["wall_time_s"],
    )


def emit_json(report: ExperimentReport, path: str | Path) -> Path:
    """Write the whole report as JSON with stable key order."""
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w") as fh:
        json.dump(report_to_dict(report), fh, sort_keys=True, indent=2)
        fh.write("\n")
    return out


def emit_plotdata(report: ExperimentReport, out_dir: str | Path) -> list[Path]:
    """One long-format CSV per cell, for external plotting."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for c in report.cells:
        p = out / f"plot_N{c.n}_T{c.t}.csv"
        with p.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["method", "metric", "trial", "value"])
            for method in _METHOD_ORDER:
                for i, row in enumerate(c.trials[method.value]):
                    for metric in METRIC_FIELDS:
                        w.writerow(
                            [
                                method.value,
                                metric,
                                i,
                                format(getattr(row, metric), ".10g"),
                            ]
                        )
            for i, v in enumerate(c.fsv_iteration_losses):
                w.writerow(["FSV", "iteration_loss", i, format(v, ".10g")])
        paths.append(p)
    return paths
