import sys

import numpy as np
import pytest

from anisoinv import linalg

try:
    from anisoinv import _jacobi_ext  # noqa: F401

    AVAILABLE_BACKENDS = ("python", "cython")
except ImportError:
    AVAILABLE_BACKENDS = ("python",)


@pytest.fixture(params=AVAILABLE_BACKENDS)
def backend(request):
    """Run a test once per available eigensolver kernel."""
    previous = linalg.use_backend(request.param)
    yield request.param
    linalg.use_backend(previous)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
