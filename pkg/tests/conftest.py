# -*- coding: utf-8 -*-
import os

import pytest

import dinc.core
from dinc.core import config
from dinc.matrices import SpdMatrix, build_second_order
from dinc.nonlinearity import AsymptoticBound, truncated_power
from dinc.variational import InclusionProblem

TESTS_DIR = os.path.dirname(__file__)
MOCK_DATA_DIR = os.path.join(TESTS_DIR, "mock_data")

#: h = t^2 on ]-1, 1[ and 0 outside: bounded, so G/t^2 and g/t vanish
H_BOUND = AsymptoticBound(0.0, 1.0, 0.0)


def mock_scenario(name):
    return os.path.join(MOCK_DATA_DIR, f'{name}.json')


def truncated_quadratic():
    return truncated_power(2, 1.0, asymptotic=H_BOUND)


# keep a solver config stored in the home directory out of the tests
dinc.core.CONFIG_PATH = os.path.join(MOCK_DATA_DIR, 'no-such-config.json')


@pytest.fixture
def h():
    return truncated_quadratic()


@pytest.fixture
def scalar_problem(h):
    """2u in 4 [h-(u), h+(u)]; solutions 0, 1/2 and 1"""
    return InclusionProblem(SpdMatrix([[2.0]]), [h], 4.0)


@pytest.fixture
def pair_problem(h):
    """T_2(-1, 2, -1) at lambda=2; solutions 0, (1/2, 1/2) and (1, 1)"""
    return InclusionProblem(build_second_order(2), [h, h], 2.0)


@pytest.fixture
def chain_problem(h):
    """T_5(-1, 2, -1) at lambda=2, above the two solution threshold 0.6"""
    return InclusionProblem(build_second_order(5), [h] * 5, 2.0)


@pytest.fixture
def quick_cfg():
    return config(starts=16, max_iters=20000)
