import pytest

from habrisk.pipeline import RunConfig, run_pipeline
from habrisk.synth import SynthConfig, write_synthetic_csv


@pytest.fixture(scope="session")
def synth_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "table.csv"
    write_synthetic_csv(path, SynthConfig(seed=17))
    return path


@pytest.fixture(scope="session")
def run_dir(tmp_path_factory, synth_csv):
    out = tmp_path_factory.mktemp("run") / "artifacts"
    cfg = RunConfig(input_csv=str(synth_csv), out_dir=str(out), seed=17)
    run_pipeline(cfg)
    return out
