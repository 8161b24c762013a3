import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from opbayes import ExpertPanel, GammaParams  # noqa: E402

# Annual loss counts, simulated from Poisson(0.6).
FREQ_COUNTS = (0, 0, 0, 0, 1, 0, 1, 1, 1, 0, 2, 1, 1, 2, 0)
FREQ_PRIOR = GammaParams(3.407, 0.147)

# Loss severities above L = 1, simulated from Pareto(4, 1).
PARETO_LOSSES = (1.17, 1.29, 1.00, 1.55, 2.66, 1.02, 1.28, 1.10, 1.06, 1.02,
                 1.59, 1.35, 1.91, 1.23, 1.03)
PARETO_PRIOR = GammaParams(4.0, 9.0 / 8.0)


@pytest.fixture
def freq_panel():
    return ExpertPanel((0.7,), 4.0)


@pytest.fixture
def pareto_panel():
    return ExpertPanel((3.5,), 4.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20070301)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is not None and module.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in module.RESULTS:
            terminalreporter.write_line(line)
