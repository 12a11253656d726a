import math
from fractions import Fraction

import numpy as np
import pytest

from conftest import directed_cycle
from constructions import (builtin_graph, complete_digraph, digraph_corpus, graph_corpus, line_digraph,
                           paley_digraph, projective_incidence)
from digraph import Digraph, NotStronglyConnected, from_edge_list
from spectral import (Disk, LineTreeRegion, Region, ResidualTooLarge, TrivialMatchFailure, TwoCircles,
                      classify_spectrum, eigenvalues_dense, equivalence_check_line, line_digraph_blocks,
                      match_trivial, multiset_distance, parse_region, ramanujan_graph_test, restricted_power_norm,
                      rho0_sparse, singular_values_dense, sparse_spectrum_report, spectrum_in_region,
                      trivial_spectrum)
from zeta import ihara_bass_prediction

OMEGA = np.exp(2j * np.pi / 3)


def _exact_det(A):
    """Fraction-based Gaussian elimination."""
    M = [[Fraction(int(x)) for x in row] for row in A]
    n = len(M)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if M[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            M[col], M[pivot] = M[pivot], M[col]
            det = -det
        det *= M[col][col]
        for r in range(col + 1, n):
            factor = M[r][col] / M[col][col]
            for c in range(col, n):
                M[r][c] -= factor * M[col][c]
    return int(det)


def test_cycle_spectrum(cycle3):
    values = eigenvalues_dense(cycle3)
    assert multiset_distance(values, [1, OMEGA, OMEGA ** 2]) < 1e-12


@pytest.mark.parametrize("name, D", digraph_corpus(), ids=[name for name, _ in digraph_corpus()])
def test_real_spectrum_is_closed_under_conjugation(name, D):
    values = eigenvalues_dense(D)
    assert multiset_distance(values, values.conj()) < 1e-6
    assert np.max(np.abs(values)) == pytest.approx(D.k, rel=1e-9)


def test_paley_seven_spectrum(paley7):
    report = classify_spectrum(paley7)
    expected = [(-1 + 1j * math.sqrt(7)) / 2] * 3 + [(-1 - 1j * math.sqrt(7)) / 2] * 3
    assert report.m == 1
    assert report.trivial[0] == pytest.approx(3)
    assert multiset_distance(report.nontrivial, expected) < 1e-9
    assert report.rho0 == pytest.approx(math.sqrt(2), abs=1e-9)
    assert report.ramanujan


def test_fano_spectrum(fano):
    report = classify_spectrum(fano)
    assert (fano.n, fano.k, report.m) == (14, 3, 2)
    assert multiset_distance(report.trivial, [3, -3]) < 1e-9
    root2 = math.sqrt(2)
    assert multiset_distance(report.nontrivial, [root2] * 6 + [-root2] * 6) < 1e-9
    assert report.ramanujan


def test_complete_periodic_spectrum(k23):
    report = classify_spectrum(k23)
    assert multiset_distance(report.trivial, [2, 2 * OMEGA, 2 * OMEGA ** 2]) < 1e-9
    assert np.all(report.nontrivial == 0)
    assert report.rho0 == 0.0


def test_de_bruijn_spectrum_is_zero(db23):
    report = classify_spectrum(db23)
    assert report.rho0 == pytest.approx(0, abs=1e-6)
    assert restricted_power_norm(db23, 3) == pytest.approx(0, abs=1e-6)


def test_zero_snap_off_leaves_scatter(db23):
    raw = eigenvalues_dense(db23, snap_zero=False)
    snapped = eigenvalues_dense(db23)
    assert np.count_nonzero(snapped == 0) == 7
    assert np.abs(raw).min() < 1e-3


def test_trivial_spectrum_of_periodic_line_digraph():
    D, _ = line_digraph(builtin_graph("complete_bipartite(3,3)"))
    triv = trivial_spectrum(D)
    assert triv.m == 2
    assert multiset_distance(triv.values, [2, -2]) < 1e-12
    A = D.dense()
    for t in range(triv.m):
        f = triv.vectors[:, t]
        assert np.linalg.norm(f) == pytest.approx(1)
        assert np.allclose(A @ f, triv.values[t] * f)


def test_aperiodic_trivial_vector(paley7):
    triv = trivial_spectrum(paley7)
    assert np.allclose(triv.vectors[:, 0], 1 / math.sqrt(7))


def test_classify_rejects_disconnected():
    with pytest.raises(NotStronglyConnected):
        classify_spectrum(from_edge_list(2, [(0, 0, 1), (1, 1, 1)]))


def test_match_trivial_failure():
    with pytest.raises(TrivialMatchFailure):
        match_trivial(np.array([0.0, 1.0]), np.array([3.0]), 3)


@pytest.mark.parametrize("name, D", digraph_corpus(), ids=[name for name, _ in digraph_corpus()])
def test_trace_and_determinant(name, D):
    values = eigenvalues_dense(D)
    assert values.sum().real == pytest.approx(D.loops(), abs=1e-6 * D.n * D.k)
    if D.n <= 64:
        det = abs(_exact_det(D.dense(dtype=np.int64).tolist()))
        assert np.prod(np.abs(values)) == pytest.approx(det, rel=1e-6, abs=1e-6)


@pytest.mark.parametrize("name, D", digraph_corpus(), ids=[name for name, _ in digraph_corpus()])
def test_nontrivial_bounded_by_k(name, D):
    report = classify_spectrum(D)
    assert report.rho0 <= D.k + 1e-9
    assert len(report.trivial) == report.m


def test_report_record_and_plot_rows(paley7):
    report = classify_spectrum(paley7)
    record = report.to_record()
    assert record.schema_version == "1.0.0"
    assert record.trivial_indices == [0]
    assert record.eigenvalues[0] == pytest.approx((3.0, 0.0))
    rows = report.plot_rows()
    assert len(rows) == 7
    assert rows[0][2] == 1 and sum(r[2] for r in rows) == 1


def test_ramanujan_margin_at_zero_tolerance():
    report = classify_spectrum(paley_digraph(7), tolerance=0.0)
    assert report.margin == pytest.approx(math.sqrt(2) - math.sqrt(3))
    assert report.ramanujan


def test_rho0_sparse_small_falls_back_to_dense():
    assert rho0_sparse(complete_digraph(3, 1)) == pytest.approx(0, abs=1e-8)


@pytest.mark.parametrize("D", [
    paley_digraph(103),
    projective_incidence(7, 2),
], ids=["paley(103)", "projective_incidence(7,2)"])
def test_arnoldi_agrees_with_dense(D):
    dense = classify_spectrum(D)
    sparse = sparse_spectrum_report(D, top=6, seed=0)
    assert sparse.method == "arnoldi"
    assert sparse.rho0 == pytest.approx(dense.rho0, abs=1e-6)
    assert sparse.ramanujan == dense.ramanujan


def test_arnoldi_is_seed_stable():
    D = paley_digraph(103)
    assert rho0_sparse(D, seed=1) == pytest.approx(rho0_sparse(D, seed=2), abs=1e-8)


@pytest.mark.parametrize("ell", range(1, 6))
def test_restricted_power_norm_of_normal_digraph(paley7, ell):
    assert restricted_power_norm(paley7, ell) == pytest.approx(math.sqrt(2) ** ell, rel=1e-6)


def test_restricted_power_norm_of_line_digraph(k4):
    D, _ = line_digraph(k4)
    assert restricted_power_norm(D, 1) == pytest.approx(2, rel=1e-6)


def test_restricted_power_norm_rejects_zero(paley7):
    with pytest.raises(ValueError):
        restricted_power_norm(paley7, 0)


def test_singular_values(cycle3, paley7):
    assert np.allclose(singular_values_dense(cycle3), [1, 1, 1])
    moduli = np.sort(np.abs(eigenvalues_dense(paley7)))[::-1]
    assert np.allclose(singular_values_dense(paley7), moduli)


@pytest.mark.parametrize("name", ["complete(4)", "petersen"])
def test_line_digraph_singular_value_degeneracy(name):
    G = builtin_graph(name)
    D, _ = line_digraph(G)
    s = singular_values_dense(D)
    assert np.sum(np.abs(s - D.k) < 1e-6) >= G.n


@pytest.mark.parametrize("name", ["complete(4)", "petersen", "complete_bipartite(3,3)"])
def test_line_digraph_spectrum_relation(name):
    G = builtin_graph(name)
    D, _ = line_digraph(G)
    values = eigenvalues_dense(D)
    assert multiset_distance(values, ihara_bass_prediction(G)) < 1e-6
    tail = G.edge_count() - G.n
    assert np.sum(np.abs(values - 1) < 1e-6) >= tail
    assert np.sum(np.abs(values + 1) < 1e-6) >= tail


def test_line_digraph_of_k4_nontrivial_spectrum(k4):
    D, _ = line_digraph(k4)
    report = classify_spectrum(D)
    mu = (-1 + 1j * math.sqrt(7)) / 2
    expected = [1] + [mu] * 3 + [mu.conjugate()] * 3 + [1, 1, -1, -1]
    assert multiset_distance(report.nontrivial, expected) < 1e-6


@pytest.mark.parametrize("name", ["complete(4)", "petersen", "complete_bipartite(3,3)", "dodecahedron"])
def test_two_normal_certificate(name):
    G = builtin_graph(name)
    blocks = line_digraph_blocks(G)
    k = G.k - 1
    assert blocks.residual <= 1e-8
    assert blocks.orthogonality <= 1e-8
    for block in blocks.blocks:
        if block.dim == 2:
            assert np.allclose(block.charpoly(), [1, -block.graph_eigenvalue, k], atol=1e-8)
    tail = G.edge_count() - G.n
    expected_degenerate = 2 if G.is_bipartite() else 1
    assert blocks.degenerate == expected_degenerate
    assert blocks.complement_dim == 2 * tail + expected_degenerate
    assert blocks.plus_ones == tail + 1
    assert blocks.minus_ones == tail + (1 if G.is_bipartite() else 0)
    D, _ = line_digraph(G)
    assert multiset_distance(blocks.eigenvalues(), eigenvalues_dense(D)) < 1e-6


def test_block_charpoly_mismatch_is_rejected(petersen):
    D, labels = line_digraph(petersen)
    doubled = Digraph(D.matrix() * 2)
    with pytest.raises(ResidualTooLarge, match="characteristic polynomial"):
        line_digraph_blocks(petersen, doubled, labels)


def test_bipartite_trivial_values_recovered_as_blocks():
    blocks = line_digraph_blocks(builtin_graph("complete_bipartite(3,3)"))
    degenerate = {round(b.graph_eigenvalue): b.eigenvalues()[0].real for b in blocks.blocks if b.dim == 1}
    assert degenerate[3] == pytest.approx(2)
    assert degenerate[-3] == pytest.approx(-2)


@pytest.mark.parametrize("name, expected", [
    ("petersen", True), ("complete(4)", True), ("cycle(10)", True), ("complete_bipartite(3,3)", True),
    ("prism(16)", False), ("prism(17)", False), ("dodecahedron", True),
])
def test_ramanujan_graph_test(name, expected):
    assert ramanujan_graph_test(builtin_graph(name)).ramanujan == expected


def test_cycle_margin():
    verdict = ramanujan_graph_test(builtin_graph("cycle(10)"))
    assert verdict.bipartite
    assert verdict.rho == pytest.approx(2 * math.cos(math.pi / 5))


@pytest.mark.parametrize("name, G", [(n, G) for n, G in graph_corpus() if G.k >= 3],
                         ids=[n for n, G in graph_corpus() if G.k >= 3])
def test_line_digraph_equivalence(name, G):
    assert equivalence_check_line(G) == ramanujan_graph_test(G).ramanujan


def test_corpus_has_non_ramanujan_non_bipartite_graph():
    verdicts = [ramanujan_graph_test(G) for _, G in graph_corpus()]
    assert any(not v.ramanujan and not v.bipartite for v in verdicts)


def test_regions(paley7, db23, k4):
    line_report = classify_spectrum(line_digraph(k4)[0])
    assert spectrum_in_region(line_report, LineTreeRegion(2))
    assert spectrum_in_region(classify_spectrum(paley7), Disk(math.sqrt(3)))
    assert not spectrum_in_region(classify_spectrum(paley7), Disk(1))
    assert spectrum_in_region(classify_spectrum(db23), Disk(0))
    assert spectrum_in_region(classify_spectrum(paley7), TwoCircles(4))
    assert not spectrum_in_region(classify_spectrum(paley7), TwoCircles(9))


def test_region_needs_a_distance():
    with pytest.raises(TypeError):
        Region()


def test_parse_region():
    assert parse_region("disk:1.5") == Disk(1.5)
    assert parse_region("line-tree:2") == LineTreeRegion(2.0)
    assert parse_region("two-circles:4") == TwoCircles(4.0)
    with pytest.raises(ValueError):
        parse_region("annulus:2")


def test_multiset_distance():
    assert multiset_distance([1, 2j], [2j, 1]) == 0
    assert multiset_distance([0, 1], [0.1, 1]) == pytest.approx(0.1)
    with pytest.raises(ValueError):
        multiset_distance([1], [1, 2])


def test_directed_cycle_helper_is_not_aperiodic():
    assert trivial_spectrum(directed_cycle(5)).m == 5


@pytest.mark.slow
def test_psl2_f31_is_ramanujan(psl2_generators):
    from algebra import cayley_digraph, read_generators

    gens = read_generators(psl2_generators, dim=2)
    D, _ = cayley_digraph(gens.field, 2, gens.generators)
    assert rho0_sparse(D, top=6, seed=0) <= 2 + 1e-4
