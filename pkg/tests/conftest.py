import random

import pytest
from hypothesis import HealthCheck, settings

from ncrat.algebra import Mat
from ncrat.evaluation import EvalPoint

settings.register_profile("ncrat", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ncrat")


def rand_mat(rng, r, c, lo=-5, hi=5):
    return Mat([[rng.randint(lo, hi) for _ in range(c)] for _ in range(r)])


def rand_point(rng, d, n, lo=-9, hi=9):
    return EvalPoint.random(rng, d, n, lo, hi)


@pytest.fixture
def rng():
    return random.Random(12345)
