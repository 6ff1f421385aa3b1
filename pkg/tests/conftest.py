import numpy as np
import pytest

from eegtcnet import build_eeg_tcnet, presets, random_weights


@pytest.fixture(scope="session")
def fixed_graph():
    return build_eeg_tcnet(presets.FIXED)


@pytest.fixture(scope="session")
def fixed_store(fixed_graph):
    return random_weights(fixed_graph, np.random.default_rng(1234))


@pytest.fixture
def rng():
    return np.random.default_rng(99)
