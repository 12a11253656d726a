import numpy as np
import pytest

from constructions import (BadPrime, HasLoopOrMultiEdge, UnknownName, builtin_graph, complete_digraph, de_bruijn,
                           digraph_corpus, graph_corpus, line_digraph, paley_digraph, projective_incidence,
                           random_regular_digraph, strongly_connected_random)
from digraph import UGraph, period, strongly_connected


@pytest.mark.parametrize("k, m, n", [(1, 1, 1), (2, 3, 6), (3, 1, 3), (3, 4, 12)])
def test_complete_digraph_shape(k, m, n):
    D = complete_digraph(k, m)
    assert (D.n, D.k) == (n, k)
    assert period(D).m == m


def test_complete_digraph_edges():
    assert np.array_equal(complete_digraph(3, 1).dense(), np.ones((3, 3)))
    D = complete_digraph(2, 3)
    assert sorted(v for u, v, _ in D.edges() if u == 0) == [2, 3]


def test_paley_three_is_a_cycle():
    assert list(paley_digraph(3).edges()) == [(0, 1, 1), (1, 2, 1), (2, 0, 1)]


def test_paley_seven_neighbourhood():
    D = paley_digraph(7)
    assert D.k == 3
    assert sorted(D.out_table()[0].tolist()) == [1, 2, 4]


def test_paley_eleven_degree():
    assert paley_digraph(11).k == 5


def test_paley_translation_invariance():
    D = paley_digraph(19)
    base = set(D.out_table()[0].tolist())
    for shift in (1, 4, 7, 11, 18):
        assert set(D.out_table()[shift].tolist()) == {(b + shift) % 19 for b in base}


@pytest.mark.parametrize("p", [5, 9, 13, 1])
def test_paley_rejects_bad_primes(p):
    with pytest.raises(BadPrime):
        paley_digraph(p)


@pytest.mark.parametrize("p, d, n, k", [(2, 2, 14, 3), (3, 2, 26, 4), (2, 3, 30, 7)])
def test_projective_incidence_shape(p, d, n, k):
    D = projective_incidence(p, d)
    assert (D.n, D.k) == (n, k)
    A = D.dense(dtype=np.int64)
    assert np.array_equal(A, A.T)
    assert period(D).m == 2


def test_projective_incidence_subspace_oracle():
    """Hyperplanes of F_2^4 enumerated as kernels of nonzero functionals."""
    vectors = [np.array([(x >> i) & 1 for i in range(4)]) for x in range(1, 16)]
    hyperplanes = {frozenset(i for i, v in enumerate(vectors) if (w @ v) % 2 == 0) for w in vectors}
    assert len(hyperplanes) == 15
    assert {len(h) for h in hyperplanes} == {7}


def test_projective_incidence_rejects():
    with pytest.raises(BadPrime):
        projective_incidence(4, 2)


@pytest.mark.parametrize("k, s, n", [(2, 1, 2), (2, 3, 8), (3, 2, 9)])
def test_de_bruijn_shape(k, s, n):
    D = de_bruijn(k, s)
    assert (D.n, D.k) == (n, k)
    assert period(D).m == 1


def test_de_bruijn_two_one_is_complete_with_loops():
    assert np.array_equal(de_bruijn(2, 1).dense(), np.ones((2, 2)))


def test_de_bruijn_shift_rule():
    D = de_bruijn(2, 3)
    # 011 -> 110, 111
    assert sorted(D.out_table()[0b011].tolist()) == [0b110, 0b111]


@pytest.mark.parametrize("name, n, m", [("complete(4)", 12, 1), ("petersen", 30, 1), ("complete_bipartite(3,3)", 18, 2)])
def test_line_digraph_shape(name, n, m):
    D, labels = line_digraph(builtin_graph(name))
    assert (D.n, D.k) == (n, 2)
    assert labels.shape == (n, 2)
    assert period(D).m == m


def test_line_digraph_is_non_backtracking(petersen):
    D, labels = line_digraph(petersen)
    for u, v, _ in D.edges():
        (a, b), (c, d) = labels[u], labels[v]
        assert b == c
        assert d != a
        assert petersen.matrix()[a, b] == 1


def test_line_digraph_rejects_multigraph():
    tripled = UGraph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)] * 3)
    assert tripled.k == 6
    with pytest.raises(HasLoopOrMultiEdge):
        line_digraph(tripled)


def test_random_regular_digraph_is_reproducible():
    assert random_regular_digraph(5, 2, 42) == random_regular_digraph(5, 2, 42)
    assert random_regular_digraph(50, 3, 1) != random_regular_digraph(50, 3, 2)


def test_random_regular_digraph_degrees():
    D = random_regular_digraph(100, 4, 9)
    A = D.dense(dtype=np.int64)
    assert np.all(A.sum(axis=0) == 4) and np.all(A.sum(axis=1) == 4)


def test_random_one_regular_is_a_permutation():
    D = random_regular_digraph(20, 1, 0)
    assert sorted(D.out_table()[:, 0].tolist()) == list(range(20))


def test_strongly_connected_random_reports_seed():
    D, used = strongly_connected_random(20, 3, 1)
    assert used >= 1
    assert strongly_connected(D)
    assert D == random_regular_digraph(20, 3, used)


@pytest.mark.parametrize("name, n, k", [("complete(4)", 4, 3), ("cycle(10)", 10, 2), ("petersen", 10, 3),
                                        ("hypercube(3)", 8, 3), ("dodecahedron", 20, 3)])
def test_builtin_graphs(name, n, k):
    G = builtin_graph(name)
    assert (G.n, G.k) == (n, k)
    assert G.is_simple()


@pytest.mark.parametrize("name", ["heawood", "complete(a)", "cycle(1,2,3)", "Petersen"])
def test_unknown_graph_names(name):
    with pytest.raises(UnknownName):
        builtin_graph(name)


def test_corpora():
    digraphs = digraph_corpus()
    assert len(digraphs) >= 15
    assert all(strongly_connected(D) for _, D in digraphs)
    graphs = graph_corpus()
    assert len(graphs) >= 10
    assert all(G.is_connected() for _, G in graphs)
