import random

import pytest

from katoforms import FunctionField


@pytest.fixture
def f2x():
    return FunctionField.make(2, ["x"])


@pytest.fixture
def f2xy():
    return FunctionField.make(2, ["x", "y"])


@pytest.fixture
def f2xyz():
    return FunctionField.make(2, ["x", "y", "z"])


@pytest.fixture
def f3xy():
    return FunctionField.make(3, ["x", "y"])


@pytest.fixture
def rng():
    return random.Random(912831)
