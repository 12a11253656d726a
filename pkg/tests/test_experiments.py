import math

import numpy as np
import pytest

from constructions import digraph_corpus, line_digraph, random_regular_digraph
from digraph import TooLarge
from experiments import (CSV_HEADER, AlonTrial, alon_experiment, alternating_trace, gelfand_estimate, summarize,
                         trial_seed)
from spectral import classify_spectrum


def test_trial_seed():
    assert trial_seed(100, 0) == 100
    assert trial_seed(100, 7) == 107


def test_alon_experiment_is_reproducible():
    first = alon_experiment(3, [10, 20], trials=4, epsilon=0.5, seed=11)
    second = alon_experiment(3, [10, 20], trials=4, epsilon=0.5, seed=11)
    assert first.results == second.results
    assert [(r.n, r.trial) for r in first.results] == [(n, t) for n in (10, 20) for t in range(4)]
    seeds = {(r.n, r.trial): r.seed for r in first.results}
    assert all(seeds[(10, t)] == seeds[(20, t)] == 11 + t for t in range(4))
    assert len(first.summaries) == 2
    for summary in first.summaries:
        assert summary.samples == 4
        assert summary.connected + summary.excluded == 4


def test_alon_experiment_is_independent_of_jobs():
    serial = alon_experiment(3, [16], trials=6, epsilon=0.3, seed=2, jobs=1)
    parallel = alon_experiment(3, [16], trials=6, epsilon=0.3, seed=2, jobs=2)
    assert serial.results == parallel.results


def test_single_trial_reruns_from_its_seed():
    experiment = alon_experiment(3, [12], trials=3, epsilon=0.3, seed=40)
    trial = experiment.results[2]
    assert trial.seed == 42
    D = random_regular_digraph(12, 3, trial.seed)
    if trial.connected:
        assert trial.rho0 == pytest.approx(classify_spectrum(D).rho0, abs=1e-9)


def test_alon_trial_row():
    trial = AlonTrial(k=3, n=10, trial=0, seed=5, connected=False)
    assert len(trial.row()) == len(CSV_HEADER)
    assert trial.row()[-1] == ""


def test_summarize_excludes_disconnected():
    trials = [AlonTrial(k=4, n=10, trial=0, seed=0, connected=False),
              AlonTrial(k=4, n=10, trial=1, seed=1, connected=True, rho0=2.1),
              AlonTrial(k=4, n=10, trial=2, seed=2, connected=True, rho0=2.5)]
    summary = summarize(10, trials, 4, 0.3)
    assert (summary.samples, summary.connected, summary.excluded) == (3, 2, 1)
    assert summary.mean == pytest.approx(2.3)
    assert summary.max == pytest.approx(2.5)
    assert summary.fraction == pytest.approx(0.5)


@pytest.mark.parametrize("k, n_list", [(1, [10]), (4, [3, 10])])
def test_alon_experiment_rejects(k, n_list):
    with pytest.raises(ValueError):
        alon_experiment(k, n_list, trials=1, epsilon=0.3, seed=0)


@pytest.mark.slow
def test_random_digraphs_are_nearly_ramanujan():
    experiment = alon_experiment(4, [200, 400, 800], trials=20, epsilon=0.3, seed=2024, jobs=2)
    for summary in experiment.summaries:
        assert summary.connected > 0
        assert summary.fraction >= 0.95


def test_gelfand_estimate_bounds_rho0_from_above():
    for name, D in digraph_corpus():
        if D.n > 200:
            continue
        rho0 = classify_spectrum(D).rho0
        estimates = gelfand_estimate(D, 10)
        assert len(estimates) == 10
        assert np.all(estimates >= rho0 - 1e-6), name


def test_gelfand_estimate_is_exact_for_normal_digraphs(paley7):
    assert np.allclose(gelfand_estimate(paley7, 6), math.sqrt(2))


def test_gelfand_estimate_converges_on_line_digraph(k4):
    D, _ = line_digraph(k4)
    estimates = gelfand_estimate(D, 40)
    rho0 = classify_spectrum(D).rho0
    assert estimates[-1] - rho0 < estimates[0] - rho0
    with pytest.raises(ValueError):
        gelfand_estimate(D, 0)


def test_alternating_trace_of_paley(paley7):
    A = paley7.dense(dtype=np.int64)
    for ell, t in [(1, 1), (2, 1), (1, 3)]:
        power = np.linalg.matrix_power(A, ell)
        expected = int(np.trace(np.linalg.matrix_power(power.T @ power, t)))
        result = alternating_trace(paley7, ell, t)
        assert result.trace == expected
        assert result.excess == expected - 3 ** (2 * ell * t)


def test_alternating_trace_vanishing_excess(cycle3, db23):
    assert alternating_trace(cycle3, 2, 2).excess == 0
    assert alternating_trace(db23, 3, 1).trace == 64
    assert alternating_trace(db23, 3, 1).excess == 0


def test_alternating_trace_rejects(paley7):
    with pytest.raises(ValueError):
        alternating_trace(paley7, 0, 1)
    with pytest.raises(TooLarge):
        alternating_trace(random_regular_digraph(129, 2, 0), 1, 1)
