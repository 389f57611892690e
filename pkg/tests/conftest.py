import numpy as np
import pytest

from hallsim import Params, build_corbino, build_rectangle


@pytest.fixture
def rect12():
    return build_rectangle(12, 12, 1.0, [])


@pytest.fixture
def corbino32():
    return build_corbino(32, 1.0, 5.0, 14.0)


@pytest.fixture
def params():
    return Params(sigma_h=1.0, dt=0.05)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
