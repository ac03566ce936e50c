import sys

import pytest

from unaryufa import automata
from unaryufa.residues import desk_instance
from unaryufa.tournament import cyclic_triangle, find_orientation


@pytest.fixture(scope="session")
def ms3():
    return desk_instance(cyclic_triangle())


@pytest.fixture(scope="session")
def ufa3(ms3):
    return automata.build_ufa(ms3)


@pytest.fixture(scope="session")
def sw3(ms3):
    return automata.build_swdfa(ms3, complement=False)


@pytest.fixture(scope="session")
def co3(ms3):
    return automata.build_swdfa(ms3, complement=True)


@pytest.fixture(scope="session")
def t7():
    return find_orientation(2, 7)


@pytest.fixture(scope="session")
def ms7(t7):
    return desk_instance(t7)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
