import pytest

from hqdeform.config import load
from hqdeform.fixtures import list_fixtures

FIXTURES = ["dihedral-h1", "dihedral-hm1", "dihedral-h1-twisted-alpha", "cyclic-recipe"]


@pytest.fixture(scope="session")
def loaded():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = load(name)
        return cache[name]

    return get


@pytest.fixture(scope="session")
def h1(loaded):
    return loaded("dihedral-h1").structure


@pytest.fixture(scope="session")
def hm1(loaded):
    return loaded("dihedral-hm1").structure


def test_fixture_list_is_complete():
    assert sorted(list_fixtures()) == sorted(FIXTURES)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
