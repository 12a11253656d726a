"""
Closed-form bounds on sizes, eigenvalues and power norms, and checkers that
compare them with measured values.
"""

import math
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as la
from pydantic import BaseModel

from constructions import digraph_corpus, graph_corpus, line_digraph
from digraph import Digraph, UGraph, is_normal, period, power_digraph, symmetrize
from spectral import classify_spectrum, multiset_distance, ramanujan_graph_test, restricted_power_norm, trivial_spectrum

logger = logging.getLogger(__name__)

SLACK = 1e-9
RELATIVE_SLACK = 1e-6
NORMAL_SIZE_EXPONENT = 10.4


class BoundCheck(BaseModel):
    """One bound evaluated against one measurement."""

    name: str
    inputs: str
    bound_value: float
    measured_value: Optional[float] = None
    satisfied: bool

    def row(self) -> Tuple[str, str, float, Optional[float], bool]:
        """CSV row ``name,inputs,bound,measured,satisfied``."""
        return (self.name, self.inputs, self.bound_value, self.measured_value, self.satisfied)


CSV_HEADER = ("name", "inputs", "bound", "measured", "satisfied")


def moore_bound(k_G: int, diam: int) -> int:
    """Largest n of a k_G-regular graph with the given diameter: 1 + k_G sum_{j<diam} (k_G-1)^j."""
    if k_G < 2 or diam < 1:
        raise ValueError(f"Moore bound needs k_G >= 2 and diam >= 1, got {k_G}, {diam}")
    return 1 + k_G * sum((k_G - 1) ** (j - 1) for j in range(1, diam + 1))


def quant_alon_boppana(k_G: int, diam: int) -> float:
    """Lower bound 2 sqrt(k_G - 1) cos(2 pi / diam) on the second largest eigenvalue."""
    if k_G < 2 or diam < 1:
        raise ValueError(f"Need k_G >= 2 and diam >= 1, got {k_G}, {diam}")
    return 2 * math.sqrt(k_G - 1) * math.cos(2 * math.pi / diam)


def normal_size_bound(k: int, m: int) -> float:
    """Size bound 2m (2k^m - 1)^10.4 for normal k-regular m-periodic Ramanujan digraphs."""
    if k < 2 or m < 1:
        raise ValueError(f"Need k >= 2 and m >= 1, got {k}, {m}")
    return 2 * m * (2 * k ** m - 1) ** NORMAL_SIZE_EXPONENT


def power_bound_rhs(k: int, lam: float, r: int, ell: int) -> float:
    """C(ell+r-1, r-1) k^(r-1) lam^(ell-r+1), the bound on ||A^ell restricted to L_0^2|| for r-normal A."""
    if ell < 1 or r < 1 or lam < 0:
        raise ValueError(f"Need ell >= 1, r >= 1, lam >= 0, got {ell}, {r}, {lam}")
    exponent = ell - r + 1
    if exponent < 0 and lam == 0:
        return math.inf
    return math.comb(ell + r - 1, r - 1) * k ** (r - 1) * lam ** exponent


def majorant_row_sum(r: int, lam: float, k: int, ell: int) -> float:
    """sum_t C(r-1, t) C(ell, t) k^t lam^(ell-t): first-row sum of M_{r,lam,k}^ell."""
    return sum(math.comb(r - 1, t) * math.comb(ell, t) * k ** t * lam ** (ell - t)
               for t in range(min(r - 1, ell) + 1))


def majorant_matrix(s: int, lam: float, k: float) -> np.ndarray:
    """s x s upper triangular matrix with lam on the diagonal and k everywhere above it."""
    return np.triu(np.full((s, s), float(k)), 1) + lam * np.eye(s)


def majorant_row_sum_literal(r: int, lam: float, k: int, ell: int) -> float:
    return float(np.linalg.matrix_power(majorant_matrix(r, lam, k), ell)[0].sum())


def digraph_alon_boppana_lower(n: float, k: int, r: int, ell: Optional[int] = None) -> float:
    """
    Lower bound on rho0 for an r-normal k-regular digraph on n vertices.

    lam^(2(ell-r+1)) >= [2 sqrt(k^(2 ell) - 1) / (C(ell+r-1, r-1)^2 k^(2r-2))]
                        * [1 - 2 pi^2 / log_{k^(2 ell) - 1}(n/2)^2]

    Args:
        ell: Path length; defaults to round(sqrt(ln(n/2)))

    Returns:
        The bound, or 0.0 (vacuous) when k = 1 or the bracket is not positive
    """
    if ell is None:
        ell = round(math.sqrt(math.log(n / 2))) if n > 2 else 0
        if ell < r:
            return 0.0
    if ell < r:
        raise ValueError(f"Need ell >= r, got ell={ell}, r={r}")
    if n <= 2:
        return 0.0
    base = k ** (2 * ell) - 1
    if base <= 1:
        return 0.0
    log_n = math.log(n / 2) / math.log(base)
    bracket = 1 - 2 * math.pi ** 2 / log_n ** 2
    if bracket <= 0:
        return 0.0
    rhs = 2 * math.sqrt(base) / (math.comb(ell + r - 1, r - 1) ** 2 * k ** (2 * r - 2)) * bracket
    return rhs ** (1 / (2 * (ell - r + 1)))


def best_alon_boppana_lower(n: float, k: int, r: int, ell_max: int = 50) -> Tuple[float, int]:
    """Largest digraph_alon_boppana_lower over ell = r..ell_max, with the maximizing ell."""
    best, best_ell = 0.0, r
    for ell in range(r, ell_max + 1):
        value = digraph_alon_boppana_lower(n, k, r, ell)
        if value > best:
            best, best_ell = value, ell
    return best, best_ell


def symmetrized_power_bound(k: int, lam: float, r: int) -> Tuple[float, float]:
    """
    Normalized bounds on the nontrivial spectral radius of the symmetrized ell-th power, for ell = r-1 and ell = r.

    f(ell) = (lam^ell + sum_t C(r-1, t) C(ell, t) k^t lam^(ell-t)) / (2 k^ell)
    """
    if r < 1:
        raise ValueError(f"Need r >= 1, got {r}")

    def f(ell: int) -> float:
        return (lam ** ell + majorant_row_sum(r, lam, k, ell)) / (2 * k ** ell)

    return f(r - 1), f(r)


# Checkers

def _holds(measured: float, bound: float, upper: bool = True) -> bool:
    if upper:
        return measured <= bound * (1 + RELATIVE_SLACK) + SLACK
    return measured >= bound - SLACK


def check_moore(name: str, G: UGraph) -> BoundCheck:
    diam = G.diameter()
    bound = moore_bound(G.k, diam)
    return BoundCheck(name="moore", inputs=f"{name} k={G.k} diam={diam}", bound_value=bound,
                      measured_value=G.n, satisfied=G.n <= bound)


def check_quant_alon_boppana(name: str, G: UGraph) -> Optional[BoundCheck]:
    """lambda_2(G) >= 2 sqrt(k-1) cos(2 pi / diam); None for diameter 1."""
    diam = G.diameter()
    if diam < 2:
        return None
    bound = quant_alon_boppana(G.k, diam)
    lambda2 = ramanujan_graph_test(G).lambda2
    return BoundCheck(name="quant_alon_boppana", inputs=f"{name} k={G.k} diam={diam}", bound_value=bound,
                      measured_value=lambda2, satisfied=_holds(lambda2, bound, upper=False))


def check_normal_size(name: str, D: Digraph) -> Optional[BoundCheck]:
    """n <= 2m(2k^m - 1)^10.4 for normal digraphs; None otherwise."""
    if D.k < 2 or not is_normal(D):
        return None
    m = period(D).m
    bound = normal_size_bound(D.k, m)
    return BoundCheck(name="normal_size", inputs=f"{name} k={D.k} m={m}", bound_value=bound,
                      measured_value=D.n, satisfied=D.n <= bound)


def check_power_bound(name: str, D: Digraph, r: int, ell_max: int = 12,
                      rho0: Optional[float] = None) -> List[BoundCheck]:
    """||A^ell restricted to L_0^2|| <= C(ell+r-1, r-1) k^(r-1) rho0^(ell-r+1) for ell = 1..ell_max."""
    rho0 = classify_spectrum(D).rho0 if rho0 is None else rho0
    checks = []
    for ell in range(1, ell_max + 1):
        measured = restricted_power_norm(D, ell)
        bound = power_bound_rhs(D.k, rho0, r, ell)
        checks.append(BoundCheck(name="power_bound", inputs=f"{name} r={r} ell={ell}", bound_value=bound,
                                 measured_value=measured, satisfied=_holds(measured, bound)))
    return checks


def check_digraph_alon_boppana(name: str, D: Digraph, r: int, rho0: Optional[float] = None) -> BoundCheck:
    rho0 = classify_spectrum(D).rho0 if rho0 is None else rho0
    bound, ell = best_alon_boppana_lower(D.n, D.k, r)
    return BoundCheck(name="digraph_alon_boppana", inputs=f"{name} r={r} ell={ell}", bound_value=bound,
                      measured_value=rho0, satisfied=_holds(rho0, bound, upper=False))


def _nontrivial_symmetric_radius(D: Digraph, ell: int) -> float:
    triv = trivial_spectrum(D)
    Q = la.null_space(triv.vectors.conj().T)
    S = symmetrize(power_digraph(D, ell)).dense()
    return float(np.abs(la.eigvalsh(Q.conj().T @ S @ Q)).max()) if Q.shape[1] else 0.0


def check_symmetrized(name: str, D: Digraph, r: int, rho0: Optional[float] = None) -> List[BoundCheck]:
    """
    Nontrivial spectral radius of symmetrize(D^ell) over its degree 2k^ell, for ell in {r-1, r}, ell >= 1.

    For normal D (r = 1) also checks that the symmetrization has nontrivial
    spectrum {mu + conj(mu)} over the nontrivial eigenvalues mu of D.
    """
    report = classify_spectrum(D)
    rho0 = report.rho0 if rho0 is None else rho0
    bounds = dict(zip((r - 1, r), symmetrized_power_bound(D.k, rho0, r)))
    checks = []
    for ell, bound in bounds.items():
        if ell < 1:
            continue
        measured = _nontrivial_symmetric_radius(D, ell) / (2 * D.k ** ell)
        checks.append(BoundCheck(name="symmetrized_power", inputs=f"{name} r={r} ell={ell}", bound_value=bound,
                                 measured_value=measured, satisfied=_holds(measured, bound)))
    if r == 1:
        triv = trivial_spectrum(D)
        Q = la.null_space(triv.vectors.conj().T)
        compressed = la.eigvalsh(Q.conj().T @ symmetrize(D).dense() @ Q)
        expected = 2 * report.nontrivial.real
        gap = multiset_distance(compressed, expected)
        checks.append(BoundCheck(name="symmetrized_spectrum", inputs=f"{name}", bound_value=RELATIVE_SLACK,
                                 measured_value=gap, satisfied=gap <= RELATIVE_SLACK))
    return checks


def certified_digraphs() -> List[Tuple[str, Digraph, int]]:
    """Corpus digraphs whose normality degree r is known: normal ones (r=1) and line digraphs (r=2)."""
    certified = [(name, D, 1) for name, D in digraph_corpus() if is_normal(D)]
    for name, G in graph_corpus():
        if G.k >= 3:
            certified.append((f"line_digraph({name})", line_digraph(G)[0], 2))
    return certified


def bounds_suite(digraphs: Optional[Sequence[Tuple[str, Digraph, int]]] = None,
                 graphs: Optional[Sequence[Tuple[str, UGraph]]] = None,
                 ell_max: int = 12) -> List[BoundCheck]:
    """
    Run every checker over certified digraphs and connected regular graphs.

    Args:
        digraphs: (name, digraph, r) triples; defaults to certified_digraphs()
        graphs: (name, graph) pairs; defaults to graph_corpus()
    """
    digraphs = certified_digraphs() if digraphs is None else digraphs
    graphs = graph_corpus() if graphs is None else graphs
    checks: List[BoundCheck] = []

    for name, G in graphs:
        checks.append(check_moore(name, G))
        quant = check_quant_alon_boppana(name, G)
        if quant is not None:
            checks.append(quant)

    for name, D, r in digraphs:
        rho0 = classify_spectrum(D).rho0
        normal = check_normal_size(name, D)
        if normal is not None:
            checks.append(normal)
        checks.extend(check_power_bound(name, D, r, ell_max, rho0))
        checks.append(check_digraph_alon_boppana(name, D, r, rho0))
        checks.extend(check_symmetrized(name, D, r, rho0))

    failed = [c for c in checks if not c.satisfied]
    for check in failed:
        logger.warning(f"Bound {check.name} violated on {check.inputs}: "
                       f"bound={check.bound_value}, measured={check.measured_value}")
    logger.info(f"Bounds suite: {len(checks)} checks, {len(failed)} violated")
    return checks
