"""Shared fixtures: small digraphs and graphs with known spectra."""

from pathlib import Path

import pytest

from constructions import builtin_graph, complete_digraph, de_bruijn, line_digraph, paley_digraph, projective_incidence
from digraph import from_edge_list

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


def directed_cycle(n):
    return from_edge_list(n, [(i, (i + 1) % n, 1) for i in range(n)])


@pytest.fixture
def cycle3():
    return directed_cycle(3)


@pytest.fixture
def paley7():
    return paley_digraph(7)


@pytest.fixture
def fano():
    return projective_incidence(2, 2)


@pytest.fixture
def db23():
    return de_bruijn(2, 3)


@pytest.fixture
def k23():
    return complete_digraph(2, 3)


@pytest.fixture
def petersen():
    return builtin_graph("petersen")


@pytest.fixture
def k4():
    return builtin_graph("complete(4)")


@pytest.fixture
def line_petersen(petersen):
    return line_digraph(petersen)[0]


@pytest.fixture
def psl2_generators():
    return DATA_DIR / "psl2_f31.txt"


@pytest.fixture
def pgl3_generators():
    return DATA_DIR / "pgl3_f4.txt"
