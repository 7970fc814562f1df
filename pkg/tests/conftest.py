import numpy as np
import pytest

from ntlimits.measure import bergman, lebesgue_circle


@pytest.fixture
def m():
    return lebesgue_circle()


@pytest.fixture
def a5():
    return bergman(5)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
