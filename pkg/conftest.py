import math
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from correlations import CorrelationTriple, correlation_triple  # noqa: E402
from state import build_x_state, random_x_state  # noqa: E402

PLATEAU_T1 = 2 / math.pi


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def random_states(rng):
    return [random_x_state(rng) for _ in range(25)]


@pytest.fixture
def plateau_triple() -> CorrelationTriple:
    """m = 1 below the transition: t1 = 2/pi, t3 = -4/pi^2."""
    return correlation_triple(1, 0.5)


@pytest.fixture
def plateau_state(plateau_triple):
    return build_x_state(plateau_triple)
