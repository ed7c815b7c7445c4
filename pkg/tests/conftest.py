import numpy as np
import pytest

from vilenkin_lab.core.group import build_config
from vilenkin_lab.core.weights import parse_weights
from vilenkin_lab.services.fixture_service import random_step_function

BUILTIN_WEIGHTS = ["fejer", "cesaro:0.5", "cesaro:2", "valpha:0.5", "log", "ualpha:1", "beta:1"]


@pytest.fixture
def cfg234():
    """m = (2, 3, 4), M_N = 24."""
    return build_config([2, 3, 4], 3)


@pytest.fixture
def cfg2322():
    return build_config([2, 3, 2, 2], 4)


@pytest.fixture
def dyadic6():
    return build_config([2], 6)


@pytest.fixture
def random_f(cfg234):
    return random_step_function(cfg234, seed=7)


@pytest.fixture(params=BUILTIN_WEIGHTS)
def builtin_q(request):
    return parse_weights(request.param)


def max_abs(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))
