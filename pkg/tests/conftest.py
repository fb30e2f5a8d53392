import pytest

from mmscheme import fixtures


@pytest.fixture(scope="session")
def strassen():
    return fixtures.strassen()


@pytest.fixture(scope="session")
def strassen_z2():
    return fixtures.strassen_z2()


@pytest.fixture(scope="session")
def hard_z2():
    """The bundled 23-summand Z2 scheme with no integer sign lift."""
    return fixtures.nonliftable_z2()
