import pytest

from prelie_pbw.scalars import RingSpec


@pytest.fixture
def Q():
    return RingSpec.rational()


@pytest.fixture
def F2abc():
    return RingSpec.truncated(2, ("alpha", "beta", "gamma"))
