import random

import networkx as nx
import pytest
from hypothesis import settings

from treeramsey.trees import Tree

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def nx_tree(tree: Tree) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(tree.n))
    g.add_edges_from(tree.edges)
    return g


def induced_is_tree(tree: Tree, verts) -> bool:
    return nx.is_tree(nx_tree(tree).subgraph(verts)) if verts else False


def nx_classes(tree: Tree) -> tuple[int, int]:
    g = nx_tree(tree)
    if tree.n == 1:
        return (1, 0)
    a, b = nx.bipartite.sets(g)
    return tuple(sorted((len(a), len(b)), reverse=True))


@pytest.fixture
def rng():
    return random.Random(12345)


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: list[str] = []


@pytest.fixture
def criterion():
    def record(number: int, ok: bool, detail: str = "") -> None:
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
        print(line)
        ACCEPTANCE.append(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
