import random

import pytest

from selfsim import catalog
from selfsim.data import parse_embedding, parse_outsplit, parse_pair


@pytest.fixture
def pair():
    """Catalog Katsura pair by name."""

    def load(name):
        return parse_pair(catalog.document(name))

    return load


@pytest.fixture
def odometer(pair):
    return pair("odometer")


@pytest.fixture
def embedding(pair):
    return pair("embedding")


@pytest.fixture
def putnam():
    return parse_embedding(catalog.document("putnam"))


@pytest.fixture
def outsplit_fig():
    return parse_outsplit(catalog.document("outsplit_fig"))


@pytest.fixture
def rng():
    return random.Random(0)
