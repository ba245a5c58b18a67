import pytest

from cjslab.standard import fixture_pr2nn, powerset_structure
from cjslab.structures import make_structure


def m3_violating():
    """{0,a,b,c,T} with any two atoms joining to T; a touches T but neither b nor c."""
    names = ["0", "a", "b", "c", "T"]
    z, T = 0, 4
    table = [[0] * 5 for _ in range(5)]
    for i in range(5):
        for j in range(5):
            if i == j or j == z:
                table[i][j] = i
            elif i == z:
                table[i][j] = j
            else:
                table[i][j] = T
    contact = [(1, 1), (2, 2), (3, 3), (4, 4), (1, 4), (2, 4), (3, 4)]
    return make_structure(names, z, T, table, contact)


def two_element(contact=True):
    return make_structure(["0", "1"], 0, 1, [[0, 1], [1, 1]], [(1, 1)] if contact else [])


def one_element():
    return make_structure(["0"], 0, 0, [[0]], [])


def chain3(contact_pairs=((1, 1), (1, 2), (2, 2))):
    return make_structure(["0", "c", "1"], 0, 2, [[0, 1, 2], [1, 1, 2], [2, 2, 2]], list(contact_pairs))


@pytest.fixture
def pr2nn():
    return fixture_pr2nn()


@pytest.fixture
def p12():
    return powerset_structure([1, 2])


@pytest.fixture
def p123():
    return powerset_structure([1, 2, 3])


@pytest.fixture
def m3():
    return m3_violating()


# acceptance lines collected by tests/test_acceptance.py
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
