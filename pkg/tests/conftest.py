import pytest

from raysearch import ErrorModel


@pytest.fixture
def P():
    return ErrorModel.percentual


@pytest.fixture
def M():
    return ErrorModel.multiplicative
