import numpy as np
import pytest
from hypothesis import settings

from scenetext import _kernels

settings.register_profile("suite", deadline=None, max_examples=25)
settings.load_profile("suite")


@pytest.fixture(params=_kernels.available())
def backend(request):
    """Run the test once per available kernel backend."""
    previous = _kernels.backend_name()
    _kernels.select(request.param)
    yield request.param
    _kernels.select(previous)


@pytest.fixture
def rng():
    return np.random.default_rng(0xC0FFEE)
