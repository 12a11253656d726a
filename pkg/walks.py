"""
Random walks on regular digraphs: distributions, cutoff profiles, spheres,
distances and a Monte-Carlo Chernoff sampler.

The walker follows edge direction, so p_{ell+1} = (A^T / k) p_ell.
"""

import math
import logging
import multiprocessing
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import csgraph
from pydantic import BaseModel, Field

import version
from config import config
from constructions import rng_for
from digraph import Digraph, DigraphError, NotStronglyConnected, TooLarge, period, strongly_connected
from spectral import restricted_power_norm

logger = logging.getLogger(__name__)


class Periodic(DigraphError):
    """The operation needs an aperiodic digraph."""


def _check_walk_size(D: Digraph) -> None:
    if D.n > config.WALK_MAX_N:
        raise TooLarge(f"n={D.n} exceeds the walk limit {config.WALK_MAX_N}")


def _check_vertex(D: Digraph, v0: int) -> None:
    if not 0 <= v0 < D.n:
        raise ValueError(f"Start vertex {v0} outside 0..{D.n - 1}")


def _transition(D: Digraph):
    return (D.matrix().T.tocsr().astype(np.float64)) / D.k


def walk_distribution(D: Digraph, v0: int, ell: int) -> np.ndarray:
    """Distribution of the walk from v0 after ell steps."""
    _check_walk_size(D)
    _check_vertex(D, v0)
    P = _transition(D)
    p = np.zeros(D.n)
    p[v0] = 1.0
    for _ in range(ell):
        p = P @ p
    return p


@dataclass(frozen=True)
class WalkStep:
    ell: int
    tv: float
    l2: float
    support: int


class WalkSummary(BaseModel):
    """JSON summary of a cutoff profile."""

    schema_version: str = Field(default_factory=lambda: str(version.record_schema()))
    n: int
    k: int
    start: int
    lmax: int
    cutoff_step: Optional[int]
    log_k_n: Optional[float]
    ell0: Optional[float]
    r: int


@dataclass
class WalkProfile:
    """Distance from equilibrium of the walk from ``start`` at every step up to lmax."""

    start: int
    n: int
    k: int
    steps: List[WalkStep] = field(default_factory=list)

    def cutoff_step(self, threshold: float = 1 / math.e) -> Optional[int]:
        """First ell with tv < threshold."""
        return next((s.ell for s in self.steps if s.tv < threshold), None)

    def rows(self) -> List[Tuple[int, float, float, int]]:
        """CSV rows ``ell,tv,l2,support``."""
        return [(s.ell, s.tv, s.l2, s.support) for s in self.steps]

    def summary(self, r: int = 1) -> WalkSummary:
        """
        Summary with the markers log_k n and ell0 = log_k n + (2r - 1) log_k log n.

        Args:
            r: Normality degree used for ell0 (1 for normal digraphs, 2 for line digraphs)
        """
        log_k_n = ell0 = None
        if self.k > 1:
            log_k_n = math.log(self.n) / math.log(self.k)
            if self.n > 2:
                ell0 = log_k_n + (2 * r - 1) * math.log(math.log(self.n)) / math.log(self.k)
        return WalkSummary(n=self.n, k=self.k, start=self.start, lmax=len(self.steps) - 1,
                           cutoff_step=self.cutoff_step(), log_k_n=log_k_n, ell0=ell0, r=r)


def cutoff_profile(D: Digraph, v0: int, lmax: int) -> WalkProfile:
    """
    Total variation and L2 distance to uniform, and support size, for ell = 0..lmax.

    Raises:
        Periodic: If D has period > 1
    """
    _check_walk_size(D)
    _check_vertex(D, v0)
    m = period(D).m
    if m > 1:
        raise Periodic(f"{D!r} has period {m}; cutoff needs an aperiodic digraph")
    P = _transition(D)
    uniform = 1.0 / D.n
    p = np.zeros(D.n)
    p[v0] = 1.0
    profile = WalkProfile(start=v0, n=D.n, k=D.k)
    for ell in range(lmax + 1):
        if ell:
            p = P @ p
        diff = p - uniform
        profile.steps.append(WalkStep(ell=ell, tv=float(0.5 * np.abs(diff).sum()),
                                      l2=float(np.linalg.norm(diff)), support=int(np.count_nonzero(p > 0))))
    return profile


def tv_bound_curve(D: Digraph, lmax: int, v0: int = 0) -> List[Tuple[int, float, float]]:
    """
    Rows (ell, tv, bound) with bound = (sqrt(n)/2) k^-ell ||A^ell restricted to L_0^2||.

    The bound follows from tv <= (sqrt(n)/2) ||p_ell - u||_2 and p_0 - u lying in L_0^2.
    """
    profile = cutoff_profile(D, v0, lmax)
    rows = []
    for step in profile.steps:
        norm = 1.0 if step.ell == 0 else restricted_power_norm(D, step.ell)
        bound = 0.5 * math.sqrt(D.n) * norm / float(D.k) ** step.ell
        rows.append((step.ell, step.tv, bound))
    return rows


def sphere_sizes(D: Digraph, v0: int) -> List[int]:
    """
    Sizes of S_ell(v0), the endpoints of length-ell paths from v0, until a set repeats.
    """
    _check_vertex(D, v0)
    AT = D.matrix().T.tocsr()
    current = np.zeros(D.n, dtype=np.int64)
    current[v0] = 1
    seen = set()
    sizes = []
    while True:
        key = np.packbits(current > 0).tobytes()
        if key in seen:
            return sizes
        seen.add(key)
        sizes.append(int(np.count_nonzero(current)))
        current = (AT @ current > 0).astype(np.int64)


def eccentricity(D: Digraph, v0: int) -> int:
    """Largest directed distance from v0."""
    _check_vertex(D, v0)
    dist = csgraph.shortest_path(D.matrix(), directed=True, unweighted=True, indices=v0)
    if np.isinf(dist).any():
        raise NotStronglyConnected(f"Some vertex is unreachable from {v0}")
    return int(dist.max())


def diameter(D: Digraph, chunk: int = 512) -> int:
    """
    Largest directed distance over all ordered pairs, by BFS from every vertex.

    Raises:
        TooLarge: If n exceeds DIAMETER_MAX_N
        NotStronglyConnected: If some pair is not joined by a path
    """
    if D.n > config.DIAMETER_MAX_N:
        raise TooLarge(f"n={D.n} exceeds the diameter limit {config.DIAMETER_MAX_N}")
    if not strongly_connected(D):
        raise NotStronglyConnected(f"{D!r} is not strongly connected")
    A = D.matrix()
    best = 0
    for start in range(0, D.n, chunk):
        rows = np.arange(start, min(start + chunk, D.n))
        dist = csgraph.shortest_path(A, directed=True, unweighted=True, indices=rows)
        best = max(best, int(dist.max()))
    return best


@dataclass(frozen=True)
class ChernoffResult:
    """Tail frequency of the sample mean exceeding gamma."""

    ell: int
    gamma: float
    trials: int
    seed: int
    exceed: int

    @property
    def frequency(self) -> float:
        return self.exceed / self.trials

    @property
    def stderr(self) -> float:
        p = self.frequency
        return math.sqrt(p * (1 - p) / self.trials)

    @property
    def exponent(self) -> Optional[float]:
        """-ln(frequency) / ell, or None when no trial exceeded gamma."""
        return -math.log(self.frequency) / self.ell if self.exceed else None


def _chernoff_chunk(args) -> int:
    table, f, ell, gamma, seed, first, last = args
    n, k = table.shape
    count = last - first
    starts = np.empty(count, dtype=np.int64)
    choices = np.empty((count, max(ell - 1, 0)), dtype=np.int64)
    for j, trial in enumerate(range(first, last)):
        rng = rng_for(seed + trial)
        starts[j] = rng.integers(n)
        choices[j] = rng.integers(k, size=ell - 1)

    v = starts
    total = f[v].copy()
    for step in range(ell - 1):
        v = table[v, choices[:, step]]
        total += f[v]
    return int(np.count_nonzero(total / ell > gamma))


def chernoff_experiment(D: Digraph, f: Sequence[float], ell: int, trials: int, gamma: float,
                        seed: Optional[int] = None, jobs: int = 1) -> ChernoffResult:
    """
    Monte-Carlo tail of (1/ell) sum f(v_i) over walks v_1..v_ell from uniform starts.

    Trial i draws from the generator seeded with seed + i, so results do not
    depend on ``jobs``.

    Raises:
        ValueError: If f is out of range, not centered, or ell/trials < 1
    """
    f = np.asarray(f, dtype=np.float64)
    if f.shape != (D.n,):
        raise ValueError(f"f must have length {D.n}, got shape {f.shape}")
    if np.abs(f).max() > 1 + 1e-12:
        raise ValueError("f must take values in [-1, 1]")
    if abs(f.sum()) > 1e-9 * D.n:
        raise ValueError(f"f must sum to zero, got {f.sum():.3e}")
    if ell < 1 or trials < 1:
        raise ValueError(f"Need ell >= 1 and trials >= 1, got ell={ell}, trials={trials}")
    seed = config.SEED if seed is None else seed
    table = np.ascontiguousarray(D.out_table())

    if jobs > 1:
        bounds = np.linspace(0, trials, jobs + 1).astype(int)
        tasks = [(table, f, ell, gamma, seed, int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
        with multiprocessing.Pool(jobs) as pool:
            exceed = sum(pool.map(_chernoff_chunk, tasks))
    else:
        exceed = _chernoff_chunk((table, f, ell, gamma, seed, 0, trials))

    result = ChernoffResult(ell=ell, gamma=gamma, trials=trials, seed=seed, exceed=exceed)
    logger.info(f"Chernoff ell={ell}, gamma={gamma}: {exceed}/{trials} exceed")
    return result
