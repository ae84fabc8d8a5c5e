import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fusionval.data import Dataset, generate_dataset
from fusionval.errors import ValidationError
from fusionval.fsv import (
    FsvConfig,
    FsvResult,
    compound_measure,
    fsv_run,
    sampled_kfold_trial,
)
from fusionval.rng import RngStream, derive_stream


def _constant_dataset(n, value=2.0):
    return Dataset(
        values=np.full(n, value),
        n=n,
        true_mean=value,
        true_var=1.0,
        seed=0,
        stream_id=0,
    )


class TestFsvConfig:
    def test_alpha_domain(self):
        with pytest.raises(ValidationError):
            FsvConfig(iterations=5, alpha=0.0)
        with pytest.raises(ValidationError):
            FsvConfig(iterations=5, alpha=1.01)
        FsvConfig(iterations=5, alpha=1.0)

    def test_low_alpha_warns(self):
        with pytest.warns(UserWarning):
            FsvConfig(iterations=5, alpha=0.5)

    def test_rejects_bad_iterations_and_sizes(self):
        with pytest.raises(ValidationError):
            FsvConfig(iterations=0)
        with pytest.raises(ValidationError):
            FsvConfig(iterations=1, k=1)
        with pytest.raises(ValidationError):
            FsvConfig(iterations=1, k=5, sample_size=4)


class TestCompoundMeasure:
    def test_plain_mean_at_alpha_one(self):
        assert compound_measure(np.array([3.0, 5.0]), 1.0) == 4.0

    def test_shrinkage(self):
        assert compound_measure(np.ones(3), 0.95) == 0.95

    def test_homogeneity(self):
        losses = np.array([1.0, 2.0, 3.0])
        scaled = compound_measure(2.5 * losses, 0.5)
        assert scaled == pytest.approx(
            2.5 * compound_measure(losses, 0.5), rel=1e-12
        )

    def test_rejects_empty_or_bad_alpha(self):
        with pytest.raises(ValidationError):
            compound_measure(np.array([]), 0.95)
        with pytest.raises(ValidationError):
            compound_measure(np.ones(3), 0.0)

    @given(
        losses=st.lists(
            st.floats(min_value=0.0, max_value=100.0), min_size=1, max_size=20
        ),
        c=st.floats(min_value=1e-3, max_value=1e3),
        alpha=st.floats(min_value=0.1, max_value=1.0),
    )
    def test_homogeneity_property(self, losses, c, alpha):
        arr = np.array(losses)
        assert compound_measure(c * arr, alpha) == pytest.approx(
            c * compound_measure(arr, alpha), rel=1e-12, abs=1e-300
        )


class TestSampledTrial:
    def test_fixed_size_trial_shape(self):
        data = generate_dataset(1_000, 0.0, 1.0, derive_stream(11, 0, 0))
        trial = sampled_kfold_trial(
            data, 5, derive_stream(11, 0, 1), sample_size=600
        )
        assert trial.fraction is None
        assert trial.m == 600
        assert trial.fold_losses.shape == (5,)
        assert trial.holdout_mse is not None

    def test_fraction_trial_bounds(self):
        data = generate_dataset(1_000, 0.0, 1.0, derive_stream(11, 1, 0))
        trial = sampled_kfold_trial(data, 5, derive_stream(11, 1, 1))
        assert 0.60 <= trial.fraction <= 0.90
        assert trial.m == int(round(trial.fraction * 1_000))

    def test_split_streams_reproduce_single_draws(self):
        data = generate_dataset(500, 0.0, 1.0, derive_stream(11, 2, 0))
        split = sampled_kfold_trial(
            data,
            5,
            derive_stream(11, 2, 1),
            folds_stream=derive_stream(11, 2, 2),
            fraction_stream=derive_stream(11, 2, 3),
        )
        again = sampled_kfold_trial(
            data,
            5,
            derive_stream(11, 2, 1),
            folds_stream=derive_stream(11, 2, 2),
            fraction_stream=derive_stream(11, 2, 3),
        )
        assert split.fraction == again.fraction
        assert split.m == again.m
        assert split.sample_mean == again.sample_mean
        assert split.sample_var == again.sample_var
        assert split.holdout_mse == again.holdout_mse
        np.testing.assert_array_equal(split.fold_losses, again.fold_losses)

    def test_rejects_sample_smaller_than_k(self):
        data = generate_dataset(100, 0.0, 1.0, derive_stream(11, 3, 0))
        with pytest.raises(ValidationError):
            sampled_kfold_trial(
                data, 5, derive_stream(11, 3, 1), sample_size=3
            )


class TestFsvRun:
    def test_constant_dataset_collapses_to_zero(self):
        result = fsv_run(
            _constant_dataset(60),
            FsvConfig(iterations=4, k=3),
            RngStream(11, 4),
        )
        assert result.compounded_measure == 0.0
        assert all(m.var_est == 0.0 for m in result.iteration_metrics)

    def test_compounding_invariant(self):
        data = generate_dataset(800, 0.0, 1.0, derive_stream(11, 5, 0))
        result = fsv_run(
            data, FsvConfig(iterations=20, k=5), derive_stream(11, 5, 1)
        )
        assert result.compounded_measure == pytest.approx(
            0.95 * result.iteration_losses.mean(), abs=1e-12
        )
        assert result.mean_iteration_loss == pytest.approx(
            result.iteration_losses.mean()
        )
        assert result.iterations == 20

    def test_result_consistency_enforced(self):
        with pytest.raises(ValidationError):
            FsvResult(
                compounded_measure=1.0,
                iteration_losses=np.array([1.0, 1.0]),
                iteration_metrics=(),
                alpha=0.95,
                k=5,
            )

    def test_rejects_small_dataset_and_exhausting_sample(self):
        data = generate_dataset(9, 0.0, 1.0, derive_stream(11, 6, 0))
        with pytest.raises(ValidationError):
            fsv_run(data, FsvConfig(iterations=1, k=5), RngStream(11, 7))
        big = generate_dataset(100, 0.0, 1.0, derive_stream(11, 6, 1))
        with pytest.raises(ValidationError):
            fsv_run(
                big,
                FsvConfig(iterations=1, k=5, sample_size=100),
                RngStream(11, 7),
            )

    def test_rejects_empty_holdout_from_wide_fraction(self):
        data = generate_dataset(10, 0.0, 1.0, derive_stream(11, 8, 0))
        config = FsvConfig(
            iterations=1, k=5, fraction_range=(0.97, 1.0)
        )
        with pytest.raises(ValidationError):
            fsv_run(data, config, RngStream(11, 9))

    def test_unbiasedness_with_and_without_shrinkage(self):
        runs, t, n, sample_size = 600, 10, 500, 375
        expected = 1.0 + 1.0 / 300.0
        for alpha, tag in ((1.0, 40), (0.9, 41)):
            means = np.empty(runs)
            config = FsvConfig(
                iterations=t, alpha=alpha, k=5, sample_size=sample_size
            )
            for r in range(runs):
                data = generate_dataset(
                    n, 0.0, 1.0, derive_stream(42, 1_000_000 + r, tag)
                )
                result = fsv_run(
                    data, config, derive_stream(42, 1_000_000 + r, tag + 2)
                )
                means[r] = result.compounded_measure
            se = means.std(ddof=1) / math.sqrt(runs)
            assert abs(means.mean() - alpha * expected) < 4 * se

    def test_long_run_average_settles_near_shrunk_expectation(self):
        data = generate_dataset(100_000, 0.0, 1.0, derive_stream(42, 50, 0))
        config = FsvConfig(
            iterations=10_000, alpha=0.95, k=5, sample_size=1_500
        )
        result = fsv_run(data, config, derive_stream(42, 50, 1))
        sample_var = float(data.values.var(ddof=1))
        target = 0.95 * sample_var * (1.0 + 1.0 / 1_200.0)
        assert abs(result.compounded_measure - target) < 0.01
