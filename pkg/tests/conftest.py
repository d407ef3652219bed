import numpy as np
import pytest

from shockline import DampingLaw, GasModel, Grid
from shockline.fields import init_field


@pytest.fixture
def gm2():
    return GasModel(gamma=2.0, big_k=1.0)


@pytest.fixture
def gm5():
    return GasModel(gamma=5.0, big_k=1.0)


@pytest.fixture
def dl_const():
    return DampingLaw(alpha=1.0, lam=0.0)


@pytest.fixture
def dl_crit():
    return DampingLaw(alpha=1.0, lam=1.0)


@pytest.fixture
def grid128():
    return Grid(n=128, length=10.0)


@pytest.fixture
def sine_field(gm2, dl_const, grid128):
    return init_field(
        {"preset": "sine", "tau0": 1.0, "u_amp": -0.2}, grid128, gm2, dl_const
    )


def rng(seed=0):
    return np.random.default_rng(seed)
