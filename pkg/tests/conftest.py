import numpy as np
import pytest

from nvgeo import NvParams, diamond_lattice, sample_bath


@pytest.fixture(scope="session")
def params():
    return NvParams()


@pytest.fixture(scope="session")
def lattice4():
    # 4 nm is the workhorse radius; build it once for the whole run
    return diamond_lattice(4e-9)


@pytest.fixture(scope="session")
def bath7(lattice4, params):
    return sample_bath(lattice4, 0.011, 7, params)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260822)
