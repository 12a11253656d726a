"""
Seeded experiments: spectra of random regular digraphs, Gelfand estimates of
the nontrivial spectral radius, and alternating-word trace diagnostics.
"""

import math
import logging
import multiprocessing
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field

import version
from config import config
from constructions import random_regular_digraph
from digraph import Digraph, TooLarge, period, strongly_connected
from spectral import classify_spectrum, eigenvalues_dense, rho0_sparse, restricted_power_norm

logger = logging.getLogger(__name__)

DENSE_TRIAL_MAX_N = 1024
TRACE_MAX_N = 128

CSV_HEADER = ("k", "n", "trial", "seed", "connected", "rho0")


class AlonTrial(BaseModel):
    k: int
    n: int
    trial: int
    seed: int
    connected: bool
    rho0: Optional[float] = None

    def row(self):
        return (self.k, self.n, self.trial, self.seed, int(self.connected),
                "" if self.rho0 is None else repr(self.rho0))


class AlonSummary(BaseModel):
    n: int
    samples: int
    connected: int
    excluded: int
    mean: Optional[float]
    max: Optional[float]
    fraction: Optional[float]


class AlonExperiment(BaseModel):
    """Inputs, per-trial results (ordered by n, trial) and per-n summaries."""

    schema_version: str = Field(default_factory=lambda: str(version.record_schema()))
    k: int
    n_list: List[int]
    trials_per_n: int
    seed: int
    epsilon: float
    results: List[AlonTrial] = Field(default_factory=list)
    summaries: List[AlonSummary] = Field(default_factory=list)


def trial_seed(seed: int, trial: int) -> int:
    """
    Seed of trial ``trial``; any single trial can be rerun from it in isolation.

    The seed does not depend on n, so trial t uses the same stream at every
    size and samples across n are correlated. Each size on its own is still an
    independent sample.
    """
    return seed + trial


def measure_trial(args) -> AlonTrial:
    """Sample one permutation-model digraph and measure its rho0 if strongly connected."""
    k, n, trial, seed, top = args
    D = random_regular_digraph(n, k, seed)
    if not strongly_connected(D):
        return AlonTrial(k=k, n=n, trial=trial, seed=seed, connected=False)
    if n <= DENSE_TRIAL_MAX_N:
        rho0 = classify_spectrum(D, eigenvalues=eigenvalues_dense(D, snap_zero=False)).rho0
    else:
        rho0 = rho0_sparse(D, top=top, seed=seed)
    return AlonTrial(k=k, n=n, trial=trial, seed=seed, connected=True, rho0=rho0)


def summarize(n: int, trials: Sequence[AlonTrial], k: int, epsilon: float) -> AlonSummary:
    values = [t.rho0 for t in trials if t.connected]
    threshold = math.sqrt(k) + epsilon
    return AlonSummary(
        n=n, samples=len(trials), connected=len(values), excluded=len(trials) - len(values),
        mean=float(np.mean(values)) if values else None,
        max=float(np.max(values)) if values else None,
        fraction=sum(v <= threshold for v in values) / len(values) if values else None,
    )


def alon_experiment(k: int, n_list: Sequence[int], trials: int, epsilon: float,
                    seed: Optional[int] = None, jobs: int = 1, top: int = 6) -> AlonExperiment:
    """
    Estimate Prob[rho0 <= sqrt(k) + epsilon] for random k-regular digraphs.

    Samples that are not strongly connected are counted and excluded.

    Raises:
        ValueError: If k < 2 or some n < k
    """
    if k < 2:
        raise ValueError(f"Need k >= 2, got {k}")
    if any(n < k for n in n_list):
        raise ValueError(f"Every n must be at least k={k}, got {list(n_list)}")
    seed = config.SEED if seed is None else seed
    tasks = [(k, n, trial, trial_seed(seed, trial), top) for n in n_list for trial in range(trials)]

    logger.info(f"Alon experiment: k={k}, n={list(n_list)}, {trials} trials each, seed={seed}")
    if jobs > 1:
        with multiprocessing.Pool(jobs) as pool:
            results = pool.map(measure_trial, tasks)
    else:
        results = [measure_trial(task) for task in tasks]

    experiment = AlonExperiment(k=k, n_list=list(n_list), trials_per_n=trials, seed=seed,
                                epsilon=epsilon, results=results)
    for n in n_list:
        summary = summarize(n, [r for r in results if r.n == n], k, epsilon)
        experiment.summaries.append(summary)
        logger.info(f"n={n}: {summary.connected}/{summary.samples} connected, "
                    f"mean rho0={summary.mean}, fraction={summary.fraction}")
    return experiment


def gelfand_estimate(D: Digraph, lmax: int) -> np.ndarray:
    """||A^ell restricted to L_0^2||^(1/ell) for ell = 1..lmax."""
    if lmax < 1:
        raise ValueError(f"Need lmax >= 1, got {lmax}")
    return np.array([restricted_power_norm(D, ell) ** (1 / ell) for ell in range(1, lmax + 1)])


@dataclass(frozen=True)
class AlternatingTrace:
    """Exact tr((A^T^ell A^ell)^t) and its excess over the m trivial contributions k^(2 ell t)."""

    ell: int
    t: int
    trace: int
    excess: int


def alternating_trace(D: Digraph, ell: int, t: int, m: Optional[int] = None) -> AlternatingTrace:
    """
    Count closed ell-alternating words of length 2 ell t, exactly.

    Raises:
        TooLarge: If n exceeds the exact-arithmetic limit
    """
    if D.n > TRACE_MAX_N:
        raise TooLarge(f"n={D.n} exceeds the exact trace limit {TRACE_MAX_N}")
    if ell < 1 or t < 1:
        raise ValueError(f"Need ell >= 1 and t >= 1, got {ell}, {t}")
    A = np.array(D.dense(dtype=np.int64).tolist(), dtype=object)
    power = A
    for _ in range(ell - 1):
        power = power @ A
    word = power.T @ power
    total = word
    for _ in range(t - 1):
        total = total @ word
    trace = int(sum(total[i, i] for i in range(D.n)))
    if m is None:
        m = period(D).m
    return AlternatingTrace(ell=ell, t=t, trace=trace, excess=trace - m * D.k ** (2 * ell * t))
