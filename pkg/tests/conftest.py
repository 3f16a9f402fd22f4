import numpy as np
import pytest

from graphdiff import Graph

ACCEPTANCE_LINES = []


@pytest.fixture
def triangle_pendant():
    """Triangle on nodes 0,1,2 plus the pendant edge 2-3 (degrees 2,2,3,1)."""
    return Graph.from_edges(4, [(0, 1), (0, 2), (1, 2), (2, 3)])


@pytest.fixture
def star4():
    return Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])


@pytest.fixture
def k3():
    return Graph.from_edges(3, [(0, 1), (0, 2), (1, 2)])


@pytest.fixture
def k4():
    return Graph(4, np.ones((4, 4), dtype=int) - np.eye(4, dtype=int))


@pytest.fixture
def acceptance_report():
    def report(criterion, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
