import numpy as np
import pytest

from casigrat import get_material, reference_trench_profile


@pytest.fixture(scope="session")
def gold():
    return get_material("gold_drude")


@pytest.fixture(scope="session")
def silicon():
    return get_material("silicon_doped")


@pytest.fixture(scope="session")
def conductor():
    return get_material("perfect_conductor")


@pytest.fixture(scope="session")
def trench():
    return reference_trench_profile()


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
