"""Shared fixtures for the internal-partitions test suite."""

import itertools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from generators import gen_circulant, gen_random_regular, gen_standard
from graphs import Bipartition, Graph, save_graph


def unpruned_internal_partitions(g: Graph) -> list[Bipartition]:
    """Every internal partition with vertex 0 in class a, by plain enumeration.

    Independent of the pruned search; only usable for small n.
    """
    found = []
    for bits in itertools.product((0, 1), repeat=g.n - 1):
        sides = [0, *bits]
        if all(sides) or not any(sides):
            continue
        if all(
            2 * sum(1 for u in g.adjacency[v] if sides[u] == sides[v]) >= g.degree(v)
            for v in range(g.n)
        ):
            found.append(Bipartition.from_sides(sides))
    return found


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


@pytest.fixture
def k4():
    return gen_standard("complete", 4)


@pytest.fixture
def k33():
    return gen_standard("complete_bipartite", 3)


@pytest.fixture
def petersen_graph():
    return petersen()


@pytest.fixture
def cycle6():
    return gen_circulant(6, [1])


@pytest.fixture
def c125_10():
    """<1,2,5>_10, the 5-regular circulant without an internal partition."""
    return gen_circulant(10, [1, 2, 5])


@pytest.fixture
def random_quintic():
    """Seeded random 5-regular graph on 40 vertices."""
    return gen_random_regular(40, 5, seed=7)


@pytest.fixture
def mock_console(mocker):
    """Mock rich consoles to prevent output during tests."""
    mocker.patch("main.err_console")
    return mocker.patch("main.console")


@pytest.fixture
def graph_file(tmp_path):
    """Write a graph to an edge-list file and return its path."""

    def write(g: Graph, name: str = "g.el") -> Path:
        path = tmp_path / name
        path.write_text(save_graph(g))
        return path

    return write
