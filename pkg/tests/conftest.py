import pytest

from fksix.lattice import make_diamond_domain


@pytest.fixture(scope="session")
def diamond0():
    return make_diamond_domain((0, 0), 0)


@pytest.fixture(scope="session")
def diamond1():
    return make_diamond_domain((1, 0), 1)


@pytest.fixture(scope="session")
def diamond2():
    return make_diamond_domain((0, 0), 2)


@pytest.fixture(scope="session")
def diamond3():
    return make_diamond_domain((1, 0), 3)
