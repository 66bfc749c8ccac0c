import numpy as np
import pytest
from hypothesis import settings

from universal_series import kernels

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

try:
    from universal_series._kernels import monomial_sum as _compiled
except ImportError:
    _compiled = None

BACKENDS = ["python"] + (["compiled"] if _compiled is not None else [])


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run the test once per available double-precision kernel."""
    fn = kernels.python_monomial_sum if request.param == "python" else _compiled
    monkeypatch.setattr(kernels, "_double_kernel", fn)
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
