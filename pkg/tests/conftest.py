import numpy as np
import pytest

from pulsemotion import PipelineConfig


@pytest.fixture
def cfg():
    return PipelineConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def mini_dataset(tmp_path_factory):
    """Small 2-subject dataset for structural harness tests (quality not
    asserted; short recordings keep it fast)."""
    from synthetic import build_dataset
    root = tmp_path_factory.mktemp("dataset")
    build_dataset(root, subjects=("s1", "s2"), duration=25.0, n_features=12)
    return root
