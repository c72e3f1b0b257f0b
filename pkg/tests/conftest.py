import pytest

from sopq.curve import new_curve


@pytest.fixture(scope="session")
def g2():
    # y^2 = x^6 - 1
    return new_curve(2, [-1, 0, 0, 0, 0, 0, 1])


@pytest.fixture(scope="session")
def g3():
    # y^2 = x^8 + x + 1
    return new_curve(3, [1, 1, 0, 0, 0, 0, 0, 0, 1])


@pytest.fixture(scope="session")
def curves(g2, g3):
    return {2: g2, 3: g3}
