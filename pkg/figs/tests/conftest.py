import shutil
import subprocess

import pytest


def run_sim(*argv):
    """Invoke the simulation CLI through its console script."""
    result = subprocess.run(["sshchain", *map(str, argv)], capture_output=True, text=True)
    assert result.returncode == 0, result.stderr
    return result


@pytest.fixture(scope="session")
def sample_inputs(tmp_path_factory):
    """One directory holding a small valid instance of every input CSV."""
    root = tmp_path_factory.mktemp("sample_inputs")
    run_sim("spectrum", "--cells", 3, "--theta-points", 32, "--out-dir", root)
    run_sim("localization", "--cells", 3, "--theta-points", 32, "--out-dir", root)
    run_sim("evolve", "--cells", 3, "--omega", 5e-3, "--nnn", "odd", "--T", 0.2,
            "--samples", 60, "--no-check-convergence", "--out-dir", root)
    run_sim("sweep", "--cells", 3, "--omega-grid", "0.005,0.02", "--t-grid", "0,0.2",
            "--no-check-convergence", "--out-dir", root)
    return root


@pytest.fixture()
def inputs_copy(sample_inputs, tmp_path):
    """Mutable copy of the sample inputs for corruption tests."""
    target = tmp_path / "inputs"
    shutil.copytree(sample_inputs, target)
    return target
