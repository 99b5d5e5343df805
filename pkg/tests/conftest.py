import pytest

from ctes.instrument import Band, SetupSpec, simulate
from ctes.sumcore import SumConfig

SINGLE_X = 207911.0
SINGLE_BAND = Band(450.173, 461.934)
DUAL_X = 523426.8
DUAL_BAND = Band(460.36, 463.24)
# 0.01 nm gives ~10 samples per fringe here, too coarse for the ell ~ 1150 threshold
DUAL_STEP = 0.002


def single_setup(M=3, j=2, **kw):
    return SetupSpec(SumConfig(M, j), SINGLE_X, SINGLE_BAND, 0.01, **kw)


@pytest.fixture(scope="session")
def single_ig():
    return simulate(single_setup())


@pytest.fixture(scope="session")
def dual_ig():
    return simulate(SetupSpec(SumConfig(3, 2), DUAL_X, DUAL_BAND, DUAL_STEP))
