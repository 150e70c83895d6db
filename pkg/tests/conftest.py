import sys
from pathlib import Path

import networkx as nx
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from contour_hcp.graph import G25_FIRST_CONTOUR, Graph, fixture  # noqa: E402
from contour_hcp.objects import initial_object  # noqa: E402


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.nodes)
    h.add_edges_from(g.edges)
    return h


@pytest.fixture
def g25():
    return fixture("g25")


@pytest.fixture
def g25_first(g25):
    return initial_object(g25, G25_FIRST_CONTOUR)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
