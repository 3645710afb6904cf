import random

import pytest

from polyfin import gen


@pytest.fixture
def rng():
    return random.Random(20240817)


@pytest.fixture(autouse=True)
def _fresh_names():
    gen.reset_counter()
    yield
