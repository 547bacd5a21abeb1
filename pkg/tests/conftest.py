from fractions import Fraction

import numpy as np
import pytest

from tools.dataset_catalog import load_dataset

# Yu-Oh weights in file order: 3 on the standard basis and the face diagonals, 2 on the cube diagonals
YUOH_WEIGHTS = [3, 3, 2, 3, 3, 3, 2, 3, 3, 3, 3, 2, 2]


def pytest_addoption(parser):
    parser.addoption("--extended", action="store_true", default=False, help="run the long sweeps")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--extended"):
        return
    skip = pytest.mark.skip(reason="needs --extended")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def kcbs():
    return load_dataset("kcbs5")


@pytest.fixture(scope="session")
def yuoh():
    return load_dataset("yuoh13")


@pytest.fixture(scope="session")
def twin():
    return load_dataset("twin10")


@pytest.fixture
def yuoh_weights():
    return [Fraction(w) for w in YUOH_WEIGHTS]


@pytest.fixture
def rng():
    return np.random.default_rng(2021)
