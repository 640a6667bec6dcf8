"""
Shared fixtures for the socodes test suite
"""
import numpy as np
import pytest

from src.codes import rm_code
from src.config import config
from src.galois import field_make


@pytest.fixture
def gf4():
    return field_make(2)


@pytest.fixture
def gf16():
    return field_make(4)


@pytest.fixture
def gf64():
    return field_make(6)


@pytest.fixture
def rm13():
    """Extended Hamming code [8,4,4], self-dual"""
    return rm_code(1, 3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def isolated_config():
    """Snapshot of the global config, restored after the test"""
    saved_values = dict(config._values)
    saved_source = config._source
    yield config
    config._values = saved_values
    config._source = saved_source
