import itertools

import pytest

from charnet.graph import Graph


def complete(n):
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star(leaves, weights=None):
    weights = weights or [1.0] * leaves
    return Graph.from_edges(leaves + 1, [(0, i + 1, w) for i, w in enumerate(weights)])


def disjoint_triangles():
    return Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])


@pytest.fixture
def fixtures():
    return {
        "K2": complete(2), "K3": complete(3), "K4": complete(4), "P3": path(3), "P4": path(4),
        "C4": cycle(4), "C5": cycle(5), "K13": star(3), "K14": star(4), "empty6": Graph.empty(6),
    }


# one line per acceptance criterion, printed after the test session
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
