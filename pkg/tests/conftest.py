import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from snsga.core import ObjectiveProblem  # noqa: E402


@pytest.fixture
def sphere():
    return ObjectiveProblem("sphere", np.full(2, -20.0), np.full(2, 20.0), lambda x: float(np.dot(x, x)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is not None and module.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(module.RESULTS):
            terminalreporter.write_line(line)
