import pytest

from tournament_partition import build, paley, random_tournament, transitive


@pytest.fixture
def three_cycle():
    return build(3, [(0, 1), (1, 2), (2, 0)])


@pytest.fixture
def p7():
    return paley(7)


@pytest.fixture
def t4():
    return transitive(4)


@pytest.fixture(scope="session")
def medium_random():
    return random_tournament(300, 11)
