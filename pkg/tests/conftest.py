import pytest

from fusionval.harness import ExperimentConfig, run_experiment


@pytest.fixture(scope="session")
def grid_report():
    """One full default-protocol run, shared by statistical tests."""
    return run_experiment(ExperimentConfig(), jobs=1)


@pytest.fixture(scope="session")
def shared_grid_report():
    """Default grid rerun with the scaling-identity stream mode."""
    return run_experiment(ExperimentConfig(shared_streams=True), jobs=1)
