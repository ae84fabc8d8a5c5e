import csv

import numpy as np
import pytest

from fusionval.data import Dataset, dataset_to_csv, generate_dataset
from fusionval.errors import ValidationError
from fusionval.rng import RngStream, derive_stream


def test_single_point_shape():
    d = generate_dataset(1, 0.0, 1.0, RngStream(1, 0))
    assert d.n == 1 and d.values.shape == (1,)


def test_rejects_bad_parameters():
    with pytest.raises(ValidationError):
        generate_dataset(0, 0.0, 1.0, RngStream(1, 0))
    with pytest.raises(ValidationError):
        generate_dataset(10, 0.0, 0.0, RngStream(1, 0))
    with pytest.raises(ValidationError):
        generate_dataset(10, 0.0, -1.0, RngStream(1, 0))


def test_standard_protocol_mean_band():
    d = generate_dataset(10_000, 0.0, 1.0, derive_stream(42, 0, 0))
    assert abs(d.values.mean()) < 0.05


def test_shifted_scaled_moments():
    d = generate_dataset(10_000, 5.0, 4.0, derive_stream(42, 1, 0))
    assert abs(d.values.mean() - 5.0) < 0.1
    assert abs(d.values.var(ddof=1) - 4.0) < 0.3
    assert d.true_mean == 5.0 and d.true_var == 4.0


def test_replay_determinism():
    a = generate_dataset(1000, 0.0, 1.0, derive_stream(7, 2, 0))
    b = generate_dataset(1000, 0.0, 1.0, derive_stream(7, 2, 0))
    np.testing.assert_array_equal(a.values, b.values)


def test_affine_relation_between_streams():
    base = generate_dataset(5000, 0.0, 1.0, derive_stream(9, 0, 0))
    moved = generate_dataset(5000, 5.0, 4.0, derive_stream(9, 0, 0))
    np.testing.assert_allclose(
        moved.values, 5.0 + 2.0 * base.values, rtol=1e-12
    )


def test_values_are_write_protected():
    d = generate_dataset(10, 0.0, 1.0, RngStream(3, 0))
    with pytest.raises(ValueError):
        d.values[0] = 99.0


def test_length_mismatch_rejected():
    with pytest.raises(ValidationError):
        Dataset(
            values=np.zeros(3),
            n=4,
            true_mean=0.0,
            true_var=1.0,
            seed=0,
            stream_id=0,
        )


def test_csv_export_round_trip(tmp_path):
    d = generate_dataset(50, 0.0, 1.0, derive_stream(11, 0, 0))
    path = dataset_to_csv(d, tmp_path / "data.csv")
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["value"]
    assert len(rows) == 51
    parsed = np.array([float(r[0]) for r in rows[1:]])
    np.testing.assert_array_equal(parsed, d.values)
