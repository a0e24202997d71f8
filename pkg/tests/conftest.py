import random

import pytest

from idag.selftest import sample_dag_2_3, sample_dag_3_1, sample_composite_2_1


@pytest.fixture
def dag23():
    return sample_dag_2_3()


@pytest.fixture
def dag31():
    return sample_dag_3_1()


@pytest.fixture
def composite21():
    return sample_composite_2_1()


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
