import pytest

from hgverify import Hypergraph


@pytest.fixture
def triangle():
    """Single CCZ hyperedge on three vertices; every r_i = 1."""
    return Hypergraph(3, [(1, 2, 3)])


@pytest.fixture
def path3():
    """Ordinary 2-edge path graph; every r_i = 0."""
    return Hypergraph(3, [(1, 2), (2, 3)])


@pytest.fixture
def mixed4():
    """Mixed 2- and 3-edges on four vertices."""
    return Hypergraph(4, [(1, 2), (2, 3, 4), (1, 3, 4)])


@pytest.fixture
def edge2():
    """One CZ edge on two vertices."""
    return Hypergraph(2, [(1, 2)])
