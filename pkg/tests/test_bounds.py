import math

import numpy as np
import pytest

from bounds import (CSV_HEADER, best_alon_boppana_lower, bounds_suite, certified_digraphs, check_digraph_alon_boppana,
                    check_moore, check_power_bound, check_quant_alon_boppana, check_symmetrized,
                    digraph_alon_boppana_lower, majorant_matrix, majorant_row_sum, majorant_row_sum_literal,
                    moore_bound, normal_size_bound, power_bound_rhs, quant_alon_boppana, symmetrized_power_bound)
from constructions import builtin_graph, complete_digraph, line_digraph


@pytest.mark.parametrize("k_G, diam, expected", [(3, 2, 10), (2, 3, 7), (4, 1, 5), (3, 3, 22)])
def test_moore_bound(k_G, diam, expected):
    assert moore_bound(k_G, diam) == expected


def test_moore_bound_is_tight_for_petersen(petersen):
    check = check_moore("petersen", petersen)
    assert check.satisfied
    assert check.bound_value == check.measured_value == 10


def test_quant_alon_boppana_values():
    assert quant_alon_boppana(3, 2) == pytest.approx(-2 * math.sqrt(2))
    assert quant_alon_boppana(3, 4) == pytest.approx(0, abs=1e-12)


def test_quant_alon_boppana_skips_diameter_one():
    assert check_quant_alon_boppana("complete(5)", builtin_graph("complete(5)")) is None
    check = check_quant_alon_boppana("dodecahedron", builtin_graph("dodecahedron"))
    assert check.satisfied
    assert check.measured_value == pytest.approx(math.sqrt(5))


def test_normal_size_bound():
    assert normal_size_bound(3, 1) == pytest.approx(2 * 5 ** 10.4)
    with pytest.raises(ValueError):
        normal_size_bound(1, 1)


def test_power_bound_rhs():
    assert power_bound_rhs(3, math.sqrt(2), 1, 4) == pytest.approx(4)
    assert power_bound_rhs(2, math.sqrt(2), 2, 3) == pytest.approx(4 * 2 * 2)
    with pytest.raises(ValueError):
        power_bound_rhs(2, 1.0, 2, 0)


@pytest.mark.parametrize("r, lam, k, ell", [(1, 1.5, 3, 4), (2, math.sqrt(2), 2, 5), (3, 0.7, 4, 6), (4, 2.0, 3, 2)])
def test_majorant_row_sum_matches_matrix_power(r, lam, k, ell):
    assert majorant_row_sum(r, lam, k, ell) == pytest.approx(majorant_row_sum_literal(r, lam, k, ell))


def test_majorant_matrix_shape():
    M = majorant_matrix(3, 0.5, 2)
    assert np.array_equal(M, [[0.5, 2, 2], [0, 0.5, 2], [0, 0, 0.5]])


def test_digraph_alon_boppana_lower_grows_with_n():
    k = 4
    values = [best_alon_boppana_lower(n, k, 1)[0] for n in (1e3, 1e6, 1e9)]
    assert values[0] < values[1] < values[2]
    assert values[-1] >= 0.9 * math.sqrt(k)


def test_digraph_alon_boppana_lower_is_vacuous_for_small_n():
    assert digraph_alon_boppana_lower(1e3, 4, 1, 1) == 0.0
    assert digraph_alon_boppana_lower(2, 4, 1) == 0.0
    with pytest.raises(ValueError):
        digraph_alon_boppana_lower(1e6, 4, 2, 1)


def test_digraph_alon_boppana_is_vacuous_for_one_regular():
    assert digraph_alon_boppana_lower(3, 1, 1, 1) == 0.0
    assert digraph_alon_boppana_lower(1e9, 1, 1) == 0.0
    assert best_alon_boppana_lower(1e9, 1, 1)[0] == 0.0
    check = check_digraph_alon_boppana("complete_digraph(1,3)", complete_digraph(1, 3), 1)
    assert check.bound_value == 0.0
    assert check.satisfied
    one_regular = [entry for entry in certified_digraphs() if entry[0] == "complete_digraph(1,3)"]
    assert one_regular
    suite = bounds_suite(digraphs=one_regular, graphs=[], ell_max=2)
    assert all(c.satisfied for c in suite)
    assert any(c.name == "digraph_alon_boppana" for c in suite)


def test_best_alon_boppana_reports_ell():
    value, ell = best_alon_boppana_lower(1e9, 4, 1)
    assert value == pytest.approx(digraph_alon_boppana_lower(1e9, 4, 1, ell))


def test_symmetrized_power_bound_normal_case():
    low, high = symmetrized_power_bound(3, math.sqrt(2), 1)
    assert low == pytest.approx(1)
    assert high == pytest.approx(math.sqrt(2) / 3)


def test_symmetrized_checks_on_paley(paley7):
    checks = check_symmetrized("paley(7)", paley7, 1)
    assert {c.name for c in checks} == {"symmetrized_power", "symmetrized_spectrum"}
    assert all(c.satisfied for c in checks)


@pytest.mark.parametrize("name", ["complete(4)", "petersen", "complete_bipartite(3,3)"])
def test_power_bound_on_line_digraphs(name):
    D, _ = line_digraph(builtin_graph(name))
    checks = check_power_bound(name, D, r=2, ell_max=12)
    assert len(checks) == 12
    assert all(c.satisfied for c in checks)


def test_power_bound_on_normal_digraph(fano):
    assert all(c.satisfied for c in check_power_bound("fano", fano, r=1, ell_max=12))


def test_certified_digraphs():
    certified = certified_digraphs()
    assert any(r == 2 for _, _, r in certified)
    assert all(r in (1, 2) for _, _, r in certified)
    assert "paley(7)" in {name for name, _, _ in certified}


def test_bounds_suite_holds_everywhere():
    checks = bounds_suite(ell_max=12)
    failed = [c for c in checks if not c.satisfied]
    assert failed == []
    names = {c.name for c in checks}
    assert {"moore", "quant_alon_boppana", "normal_size", "power_bound", "digraph_alon_boppana",
            "symmetrized_power", "symmetrized_spectrum"} <= names
    assert len(checks[0].row()) == len(CSV_HEADER)
