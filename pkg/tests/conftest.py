import numpy as np
import pytest

from quditphase import QuditSystem


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


@pytest.fixture(params=[2, 3, 4, 5])
def single(request):
    return QuditSystem(request.param, 1)
