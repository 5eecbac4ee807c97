import numpy as np
import pytest

from rs_toolkit import QParameter


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


@pytest.fixture(params=[0.3, 0.6, 0.9])
def qp(request):
    return QParameter(request.param)


@pytest.fixture
def q_half():
    return QParameter(0.5)
