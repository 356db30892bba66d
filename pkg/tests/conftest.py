import pytest

from quantic.corpus import ring_corpus, standard_corpus


@pytest.fixture(scope="session")
def corpus():
    return standard_corpus()


@pytest.fixture(scope="session")
def rings():
    return ring_corpus()


@pytest.fixture(scope="session")
def z4(rings):
    return rings["z4"]
