import sys

import pytest

from hightors.cli import corpus
from hightors.higher import cluster_tilting_subcategory
from hightors.modcat import registry


def _load(name):
    A = corpus()[name].build()
    M = cluster_tilting_subcategory(A, corpus()[name].module_M or None)
    return A, M


@pytest.fixture(scope="session")
def gamma():
    """The n = 2 algebra k(1 -> 2 -> 3)/(b.a) with its cluster tilting subcategory."""
    A, M = _load("gamma")
    reg = registry(A)
    labels = {reg.label(i): i for i in range(len(reg.entries()))}
    return A, M, labels


@pytest.fixture(scope="session")
def gamma_cat(gamma):
    from hightors.angulated import AngulatedCategory

    A, M, _ = gamma
    return AngulatedCategory(A, M)


@pytest.fixture(scope="session")
def load():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = _load(name)
        return cache[name]

    return get


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
