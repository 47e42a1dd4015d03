import numpy as np
import pytest

from shiftbf import _core


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


@pytest.fixture(params=_core.available_backends())
def backend(request):
    """Run a test once per available compute backend."""
    previous = _core.backend_name()
    _core.use_backend(request.param)
    try:
        yield request.param
    finally:
        _core.use_backend(previous)
