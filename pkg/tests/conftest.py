import numpy as np
import pytest

from photonmedium import MediumParams, WavepacketSpec, make_sphere_rule


@pytest.fixture(scope="session")
def medium():
    return MediumParams()


@pytest.fixture(scope="session")
def wavepacket():
    return WavepacketSpec(k0_hat=(1.0, 0.0, 0.0), k0_mag=0.5, sigma=0.25)


@pytest.fixture(scope="session")
def rule30():
    return make_sphere_rule(30)


@pytest.fixture(scope="session")
def rule12():
    return make_sphere_rule(12)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260801)
