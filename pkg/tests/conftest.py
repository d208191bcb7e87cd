import pytest

from ellwk.rootsys import build_system


@pytest.fixture(scope="session")
def a1():
    return build_system("A", 1)


@pytest.fixture(scope="session")
def a2():
    return build_system("A", 2)
