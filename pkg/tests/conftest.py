import numpy as np
import pytest

from graspsyn.dataset import Dataset, extract_features
from graspsyn.hand import GraspTrial, ObjectSpec, GraspType, TrialMeta
from graspsyn.synthetic import SyntheticConfig, generate_synthetic_trial, iter_grid


def make_trial(forces, angles, obj=None, subject="S01", trial_index=1, rate=40.0, duration=None):
    forces = np.asarray(forces, dtype=float)
    obj = obj or ObjectSpec("Apple", GraspType.SG, 158.01)
    meta = TrialMeta(subject, obj, trial_index, rate, duration or len(forces) / rate)
    return GraspTrial(meta, forces, angles)


def synth(cfg):
    pairs = [generate_synthetic_trial(cfg, s, o, k) for s, o, k in iter_grid(cfg)]
    return [t for t, _ in pairs], [g for _, g in pairs]


@pytest.fixture(scope="session")
def default_cfg():
    return SyntheticConfig(seed=42)


@pytest.fixture(scope="session")
def default_synth(default_cfg):
    return synth(default_cfg)


@pytest.fixture(scope="session")
def default_records(default_synth):
    trials, _ = default_synth
    return extract_features(Dataset(trials))


@pytest.fixture(scope="session")
def noiseless_synth(default_cfg):
    return synth(default_cfg.noiseless())


@pytest.fixture(scope="session")
def dataset_dir(tmp_path_factory, default_cfg):
    from graspsyn.io import generate_synthetic_dataset

    root = tmp_path_factory.mktemp("synthetic")
    generate_synthetic_dataset(default_cfg, root)
    return root


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
