"""
Spectra of regular digraphs and graphs.

Covers dense and Arnoldi eigenvalue computation for nonsymmetric adjacency
matrices, separation of the trivial spectrum (the k-th roots of unity pattern
forced by periodicity), Ramanujan verdicts, norms of A^ell restricted to the
orthogonal complement of the trivial eigenvectors, and the explicit 2-block
decomposition of non-backtracking line digraphs.
"""

import re
from abc import ABC, abstractmethod
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as la
from scipy.optimize import linear_sum_assignment
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, LinearOperator, eigs, svds
from pydantic import BaseModel, Field, field_validator

import version
from config import config
from constructions import line_digraph, rng_for
from digraph import Digraph, DigraphError, UGraph, period

logger = logging.getLogger(__name__)

SPARSE_MIN_N = 64


class NoConvergence(DigraphError):
    """An iterative or dense eigensolver did not converge."""


class TrivialMatchFailure(DigraphError):
    """No computed eigenvalue lies near a predicted trivial eigenvalue."""


class ResidualTooLarge(DigraphError):
    """An invariant-subspace certificate failed its residual check."""


class Disconnected(DigraphError):
    """The graph is not connected."""


class EquivalenceMismatch(DigraphError):
    """Two verdicts that must agree did not."""


# Eigenvalues

def zero_multiplicity(A: np.ndarray, k: int) -> int:
    """
    Algebraic multiplicity of the eigenvalue 0, as n - rank((A/k)^j) once the rank stops dropping.
    """
    n = A.shape[0]
    M = A / k
    power = M.copy()
    rank = np.linalg.matrix_rank(power)
    for _ in range(n):
        if rank == 0:
            break
        power = power @ M
        next_rank = np.linalg.matrix_rank(power)
        if next_rank == rank:
            break
        rank = next_rank
    return n - rank


def eigenvalues_dense(D: Digraph, snap_zero: bool = True, threshold: Optional[int] = None) -> np.ndarray:
    """
    All n eigenvalues of A_D with multiplicity (LAPACK geev).

    With ``snap_zero`` the exact multiplicity z of the eigenvalue 0 is
    measured by ranks of powers, and the z computed eigenvalues of smallest
    modulus are set to 0. Nilpotent Jordan blocks otherwise scatter these
    around the origin at radius eps**(1/size).

    Raises:
        TooLarge: If n exceeds the dense threshold
        NoConvergence: If LAPACK fails
    """
    A = D.dense(threshold=threshold)
    try:
        values = la.eigvals(A, check_finite=False)
    except la.LinAlgError as e:
        raise NoConvergence(f"Dense eigensolver failed for {D!r}: {e}") from e

    if snap_zero and D.n <= config.ZERO_SNAP_MAX_N:
        z = zero_multiplicity(A, D.k)
        if z:
            smallest = np.argsort(np.abs(values))[:z]
            worst = float(np.abs(values[smallest]).max())
            if worst > 1e-3 * D.k:
                logger.warning(f"Skipping zero snap for {D!r}: {z} zeros expected, "
                               f"but a candidate has modulus {worst:.3e}")
            else:
                values[smallest] = 0
    return values


@dataclass(frozen=True)
class TrivialSpectrum:
    """Period, trivial eigenvalues k*w^t and their closed-form orthonormal eigenvectors (columns)."""

    m: int
    values: np.ndarray
    vectors: np.ndarray
    classes: np.ndarray


def trivial_spectrum(D: Digraph) -> TrivialSpectrum:
    """
    Trivial eigenpairs f_t(v) = exp(2 pi i t class(v) / m) / sqrt(n), eigenvalue k exp(2 pi i t / m).

    Raises:
        NotStronglyConnected: If D is not strongly connected
    """
    pdata = period(D)
    m = pdata.m
    t = np.arange(m)
    values = D.k * np.exp(2j * np.pi * t / m)
    if m == 1:
        vectors = np.full((D.n, 1), 1 / np.sqrt(D.n))
        values = values.real.astype(float)
    else:
        vectors = np.exp(2j * np.pi * np.outer(pdata.classes, t) / m) / np.sqrt(D.n)
    return TrivialSpectrum(m=m, values=values, vectors=vectors, classes=pdata.classes)


class SpectrumRecord(BaseModel):
    """Versioned JSON form of a SpectrumReport."""

    schema_version: str = Field(default_factory=lambda: str(version.record_schema()))
    n: int
    k: int
    m: int
    method: str
    tolerance: float
    eigenvalues: List[Tuple[float, float]]
    trivial_indices: List[int]
    rho0: float
    ramanujan: bool
    margin: float

    @field_validator("schema_version")
    @classmethod
    def _readable(cls, value: str) -> str:
        return str(version.check_record_version(value))


@dataclass
class SpectrumReport:
    """
    Classified spectrum of a regular digraph.

    For the dense method ``eigenvalues`` holds all n values; for Arnoldi it
    holds the m trivial values followed by the computed top of the
    nontrivial spectrum.
    """

    n: int
    k: int
    m: int
    eigenvalues: np.ndarray
    trivial_indices: np.ndarray
    rho0: float
    ramanujan: bool
    margin: float
    method: str = "dense"
    tolerance: float = 1e-8

    @property
    def trivial(self) -> np.ndarray:
        return self.eigenvalues[self.trivial_indices]

    @property
    def nontrivial(self) -> np.ndarray:
        mask = np.ones(len(self.eigenvalues), dtype=bool)
        mask[self.trivial_indices] = False
        return self.eigenvalues[mask]

    def _order(self) -> np.ndarray:
        return np.lexsort((np.angle(self.eigenvalues), -np.round(np.abs(self.eigenvalues), 10)))

    def to_record(self) -> SpectrumRecord:
        order = self._order()
        position = np.empty_like(order)
        position[order] = np.arange(len(order))
        values = self.eigenvalues[order]
        return SpectrumRecord(
            n=self.n, k=self.k, m=self.m, method=self.method, tolerance=self.tolerance,
            eigenvalues=[(float(z.real), float(z.imag)) for z in values],
            trivial_indices=sorted(int(position[i]) for i in self.trivial_indices),
            rho0=self.rho0, ramanujan=self.ramanujan, margin=self.margin,
        )

    def plot_rows(self) -> List[Tuple[float, float, int]]:
        """Rows ``re, im, is_trivial`` for a complex-plane scatter."""
        trivial = np.zeros(len(self.eigenvalues), dtype=bool)
        trivial[self.trivial_indices] = True
        return [(float(z.real), float(z.imag), int(trivial[i]))
                for i, z in ((i, self.eigenvalues[i]) for i in self._order())]


def ramanujan_verdict(rho0: float, k: int, tolerance: Optional[float] = None) -> Tuple[bool, float]:
    """(rho0 <= sqrt(k)(1+tol) + tol, rho0 - sqrt(k))."""
    tol = config.TOLERANCE if tolerance is None else tolerance
    root = np.sqrt(k)
    return bool(rho0 <= root * (1 + tol) + tol), float(rho0 - root)


def match_trivial(values: np.ndarray, trivial: np.ndarray, k: int) -> np.ndarray:
    """
    Indices of the computed eigenvalues nearest each trivial value, each used once.

    Raises:
        TrivialMatchFailure: If a trivial value has no eigenvalue within TRIVIAL_MATCH_TOL * k
    """
    limit = config.TRIVIAL_MATCH_TOL * k
    taken = np.zeros(len(values), dtype=bool)
    chosen = []
    for target in trivial:
        distance = np.abs(values - target)
        distance[taken] = np.inf
        j = int(np.argmin(distance))
        if distance[j] > limit:
            raise TrivialMatchFailure(
                f"No eigenvalue within {limit:.1e} of trivial value {complex(target):.6g} "
                f"(nearest at distance {distance[j]:.3e})"
            )
        if distance[j] > 0.01 * limit:
            logger.warning(f"Trivial value {complex(target):.6g} matched at distance {distance[j]:.3e}")
        taken[j] = True
        chosen.append(j)
    return np.array(chosen, dtype=np.int64)


def classify_spectrum(D: Digraph, tolerance: Optional[float] = None,
                      eigenvalues: Optional[np.ndarray] = None) -> SpectrumReport:
    """
    Split the dense spectrum into trivial and nontrivial parts.

    Args:
        D: Strongly connected digraph
        tolerance: Ramanujan verdict tolerance; defaults to config.TOLERANCE
        eigenvalues: Precomputed eigenvalues of D

    Returns:
        SpectrumReport with rho0 the largest nontrivial modulus

    Raises:
        NotStronglyConnected: If D is not strongly connected
        TrivialMatchFailure: If the eigensolver missed a trivial value
    """
    tol = config.TOLERANCE if tolerance is None else tolerance
    triv = trivial_spectrum(D)
    values = eigenvalues_dense(D) if eigenvalues is None else np.asarray(eigenvalues, dtype=complex)
    values = np.asarray(values, dtype=complex)
    trivial_idx = match_trivial(values, triv.values, D.k)

    mask = np.ones(len(values), dtype=bool)
    mask[trivial_idx] = False
    rho0 = float(np.abs(values[mask]).max()) if mask.any() else 0.0
    ramanujan, margin = ramanujan_verdict(rho0, D.k, tol)
    logger.debug(f"{D!r}: m={triv.m}, rho0={rho0:.10g}, ramanujan={ramanujan}")
    return SpectrumReport(n=D.n, k=D.k, m=triv.m, eigenvalues=values, trivial_indices=trivial_idx,
                          rho0=rho0, ramanujan=ramanujan, margin=margin, method="dense", tolerance=tol)


# Projection onto L_0^2 and the Arnoldi path

def _projector(triv: TrivialSpectrum):
    F = triv.vectors
    Fh = F.conj().T

    def project(x: np.ndarray) -> np.ndarray:
        return x - F @ (Fh @ x)

    return project


def _start_vector(n: int, seed: int, complex_dtype: bool) -> np.ndarray:
    rng = rng_for(seed)
    v0 = rng.standard_normal(n)
    if complex_dtype:
        v0 = v0 + 1j * rng.standard_normal(n)
    return v0


def arnoldi_nontrivial(D: Digraph, top: int = 6, seed: Optional[int] = None,
                       triv: Optional[TrivialSpectrum] = None) -> np.ndarray:
    """
    Largest-modulus eigenvalues of P0 A P0 by implicitly restarted Arnoldi (ARPACK).

    Each returned pair is certified by ||P0 A P0 x - lambda x|| <= ARNOLDI_CERT_TOL * k.

    Raises:
        NoConvergence: If ARPACK fails or a residual certificate fails
    """
    triv = triv or trivial_spectrum(D)
    seed = config.SEED if seed is None else seed
    n = D.n
    complex_dtype = triv.m > 1
    dtype = np.complex128 if complex_dtype else np.float64
    A = D.matrix().astype(np.float64)
    project = _projector(triv)

    op = LinearOperator((n, n), matvec=lambda x: project(A @ project(x)), dtype=dtype)
    nev = max(1, min(top, n - 2))
    ncv = min(n - 1, max(40, 4 * nev))
    v0 = project(_start_vector(n, seed, complex_dtype))
    try:
        values, vectors = eigs(op, k=nev, which="LM", v0=v0, ncv=ncv,
                               tol=config.ARNOLDI_TOL, maxiter=config.ARNOLDI_MAXITER)
    except (ArpackNoConvergence, ArpackError) as e:
        raise NoConvergence(f"ARPACK failed on {D!r}: {e}") from e

    vectors = vectors / np.linalg.norm(vectors, axis=0)
    residual = max(float(np.linalg.norm(op.matvec(vectors[:, j]) - values[j] * vectors[:, j]))
                   for j in range(len(values)))
    if residual > config.ARNOLDI_CERT_TOL * D.k:
        raise NoConvergence(f"Arnoldi residual {residual:.3e} exceeds certificate tolerance on {D!r}")
    logger.debug(f"Arnoldi on {D!r}: {len(values)} values, residual {residual:.3e}")
    return values


def rho0_sparse(D: Digraph, tolerance: Optional[float] = None, top: int = 6,
                seed: Optional[int] = None) -> float:
    """
    Largest nontrivial eigenvalue modulus via Arnoldi on P0 A P0.

    Small digraphs, and digraphs on which ARPACK fails but that fit the
    dense threshold, use the dense path.

    Raises:
        NoConvergence: If neither path is available
    """
    if D.n < SPARSE_MIN_N:
        return classify_spectrum(D, tolerance).rho0
    try:
        return float(np.abs(arnoldi_nontrivial(D, top=top, seed=seed)).max())
    except NoConvergence as e:
        if D.n <= config.DENSE_THRESHOLD:
            logger.warning(f"{e}; falling back to the dense eigensolver")
            return classify_spectrum(D, tolerance).rho0
        raise


def sparse_spectrum_report(D: Digraph, top: int = 6, tolerance: Optional[float] = None,
                           seed: Optional[int] = None) -> SpectrumReport:
    """SpectrumReport built from the closed-form trivial values and the Arnoldi top of the rest."""
    tol = config.TOLERANCE if tolerance is None else tolerance
    if D.n < SPARSE_MIN_N:
        return classify_spectrum(D, tol)
    triv = trivial_spectrum(D)
    nontrivial = arnoldi_nontrivial(D, top=top, seed=seed, triv=triv)
    values = np.concatenate([np.asarray(triv.values, dtype=complex), nontrivial])
    rho0 = float(np.abs(nontrivial).max())
    ramanujan, margin = ramanujan_verdict(rho0, D.k, tol)
    return SpectrumReport(n=D.n, k=D.k, m=triv.m, eigenvalues=values,
                          trivial_indices=np.arange(triv.m), rho0=rho0, ramanujan=ramanujan,
                          margin=margin, method="arnoldi", tolerance=tol)


def restricted_power_norm(D: Digraph, ell: int, seed: Optional[int] = None) -> float:
    """
    ||A^ell restricted to L_0^2||, the top singular value of P0 A^ell P0.

    Dense SVD up to POWER_NORM_DENSE_MAX vertices, Lanczos (svds) above.

    Raises:
        ValueError: If ell < 1
        NoConvergence: If the iterative path fails
    """
    if ell < 1:
        raise ValueError(f"Power must be positive, got {ell}")
    triv = trivial_spectrum(D)
    n = D.n
    F = triv.vectors

    if n <= config.POWER_NORM_DENSE_MAX:
        P0 = np.eye(n) - F @ F.conj().T
        power = np.linalg.matrix_power(D.dense(threshold=n), ell)
        return float(la.svdvals(P0 @ power @ P0)[0])

    A = D.matrix().astype(np.float64)
    AT = A.T.tocsr()
    project = _projector(triv)

    def forward(x):
        y = project(x)
        for _ in range(ell):
            y = A @ y
        return project(y)

    def backward(x):
        y = project(x)
        for _ in range(ell):
            y = AT @ y
        return project(y)

    complex_dtype = triv.m > 1
    op = LinearOperator((n, n), matvec=forward, rmatvec=backward,
                        dtype=np.complex128 if complex_dtype else np.float64)
    seed = config.SEED if seed is None else seed
    try:
        s = svds(op, k=1, tol=config.POWER_NORM_TOL, return_singular_vectors=False,
                 v0=project(_start_vector(n, seed, complex_dtype)), maxiter=config.ARNOLDI_MAXITER)
    except (ArpackNoConvergence, ArpackError) as e:
        raise NoConvergence(f"Power norm iteration failed on {D!r} at ell={ell}: {e}") from e
    return float(s.max())


def singular_values_dense(D: Digraph) -> np.ndarray:
    """Singular values of A_D, descending."""
    return la.svdvals(D.dense())


# Line digraphs

@dataclass
class Block:
    """Invariant subspace of A_{D_L(G)} attached to one eigenpair of A_G."""

    graph_eigenvalue: float
    basis: np.ndarray
    action: np.ndarray
    residual: float

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def charpoly(self) -> np.ndarray:
        """Monic characteristic polynomial coefficients, highest degree first."""
        return np.poly(self.action)

    def eigenvalues(self) -> np.ndarray:
        return la.eigvals(self.action)


@dataclass
class BlockDecomposition:
    """
    Orthogonal decomposition of A_{D_L(G)} into blocks of size <= 2 plus a complement.

    Attributes:
        blocks: One block per eigenpair of A_G
        residual: Max block residual ||A Q - Q T||
        orthogonality: Max |<q_i, q_j>| across distinct blocks
        complement_dim: Dimension of the orthogonal complement of all blocks
        complement_eigenvalues: Eigenvalues of A compressed to the complement
        plus_ones: Complement eigenvalues within 1e-6 of +1
        minus_ones: Complement eigenvalues within 1e-6 of -1
        degenerate: Number of 1-dimensional blocks (graph eigenvalue +-(k+1))
    """

    blocks: List[Block]
    residual: float
    orthogonality: float
    complement_dim: int
    complement_eigenvalues: np.ndarray
    complement_residual: float
    plus_ones: int = 0
    minus_ones: int = 0
    degenerate: int = 0

    def eigenvalues(self) -> np.ndarray:
        parts = [b.eigenvalues() for b in self.blocks] + [self.complement_eigenvalues]
        return np.concatenate([np.asarray(p, dtype=complex) for p in parts])


def _check_block_charpoly(block: Block, k: int, atol: float) -> None:
    """Match a block against mu^2 - lambda mu + k, or its root sign(lambda) k when 1-dimensional."""
    lam = block.graph_eigenvalue
    if block.dim == 2:
        expected = np.array([1.0, -lam, k])
        actual = np.real_if_close(block.charpoly())
    else:
        expected = np.array([np.sign(lam) * k])
        actual = block.eigenvalues()
    error = float(np.max(np.abs(actual - expected)))
    if error > atol:
        raise ResidualTooLarge(f"Block at lambda={lam:.6f} has characteristic polynomial off by {error:.3e}")


def line_digraph_blocks(G: UGraph, D: Optional[Digraph] = None,
                        labels: Optional[np.ndarray] = None,
                        tolerance: Optional[float] = None) -> BlockDecomposition:
    """
    Certify that A_{D_L(G)} is 2-normal.

    For each eigenpair (lambda, f) of A_G the span of g1(v,w) = f(w) and
    g2(v,w) = f(v) is invariant, with A g1 = lambda g1 - g2 and A g2 = k g1,
    so its characteristic polynomial is mu^2 - lambda mu + k.

    Raises:
        ResidualTooLarge: If a block residual or a block characteristic polynomial
            coefficient is off by more than tolerance * k
    """
    if D is None or labels is None:
        D, labels = line_digraph(G)
    tol = 1e-8 if tolerance is None else tolerance
    k = G.k - 1
    A = D.dense()
    lam, f = la.eigh(G.dense())
    tails, heads = labels[:, 0], labels[:, 1]

    blocks: List[Block] = []
    for i in range(G.n):
        pair = np.column_stack([f[heads, i], f[tails, i]])
        Q, R = la.qr(pair, mode="economic")
        if abs(R[1, 1]) < 1e-9 * abs(R[0, 0]):
            Q = Q[:, :1]
        action = Q.T @ A @ Q
        residual = float(np.linalg.norm(A @ Q - Q @ action))
        blocks.append(Block(graph_eigenvalue=float(lam[i]), basis=Q, action=action, residual=residual))
        _check_block_charpoly(blocks[-1], k, tol * k)

    W = np.concatenate([b.basis for b in blocks], axis=1)
    gram = W.T @ W
    np.fill_diagonal(gram, 0)
    offsets = np.cumsum([0] + [b.dim for b in blocks])
    for b, start in enumerate(offsets[:-1]):
        gram[start:offsets[b + 1], start:offsets[b + 1]] = 0
    orthogonality = float(np.abs(gram).max()) if gram.size else 0.0

    C = la.null_space(W.T)
    if C.shape[1]:
        T = C.T @ A @ C
        complement_eigs = la.eigvals(T)
        complement_residual = float(np.linalg.norm(A @ C - C @ T))
    else:
        complement_eigs = np.zeros(0, dtype=complex)
        complement_residual = 0.0

    residual = max(b.residual for b in blocks)
    decomposition = BlockDecomposition(
        blocks=blocks,
        residual=residual,
        orthogonality=orthogonality,
        complement_dim=C.shape[1],
        complement_eigenvalues=complement_eigs,
        complement_residual=complement_residual,
        plus_ones=int(np.sum(np.abs(complement_eigs - 1) < 1e-6)),
        minus_ones=int(np.sum(np.abs(complement_eigs + 1) < 1e-6)),
        degenerate=sum(1 for b in blocks if b.dim == 1),
    )
    if max(residual, complement_residual) > tol * k:
        raise ResidualTooLarge(f"Block residual {max(residual, complement_residual):.3e} exceeds {tol * k:.1e}")
    logger.debug(f"Line digraph of {G!r}: {len(blocks)} blocks, complement {C.shape[1]} "
                 f"(+1 x{decomposition.plus_ones}, -1 x{decomposition.minus_ones})")
    return decomposition


# Undirected graphs

@dataclass(frozen=True)
class GraphVerdict:
    """Ramanujan verdict of a connected regular graph."""

    ramanujan: bool
    margin: float
    rho: float
    lambda2: float
    bipartite: bool
    eigenvalues: np.ndarray = field(repr=False)


def ramanujan_graph_test(G: UGraph, tolerance: Optional[float] = None) -> GraphVerdict:
    """
    Check every nontrivial eigenvalue modulus against 2 sqrt(k-1).

    Trivial eigenvalues are k, and -k for bipartite graphs.

    Raises:
        Disconnected: If G is not connected
    """
    if not G.is_connected():
        raise Disconnected(f"{G!r} is not connected")
    tol = config.TOLERANCE if tolerance is None else tolerance
    values = la.eigvalsh(G.dense())
    bipartite = G.is_bipartite()
    rest = values[1:-1] if bipartite else values[:-1]
    rho = float(np.abs(rest).max()) if len(rest) else 0.0
    bound = 2 * np.sqrt(G.k - 1)
    lambda2 = float(values[-2]) if len(values) > 1 else float(values[-1])
    return GraphVerdict(ramanujan=bool(rho <= bound * (1 + tol) + tol), margin=float(rho - bound),
                        rho=rho, lambda2=lambda2, bipartite=bipartite, eigenvalues=values)


def equivalence_check_line(G: UGraph, tolerance: Optional[float] = None) -> bool:
    """
    G is Ramanujan iff its line digraph is; returns the joint verdict.

    Raises:
        EquivalenceMismatch: If the two verdicts differ
    """
    D, _ = line_digraph(G)
    graph_verdict = ramanujan_graph_test(G, tolerance).ramanujan
    digraph_verdict = classify_spectrum(D, tolerance).ramanujan
    if graph_verdict != digraph_verdict:
        raise EquivalenceMismatch(f"{G!r} Ramanujan={graph_verdict} but line digraph Ramanujan={digraph_verdict}")
    return graph_verdict


# Regions of the complex plane

class Region(ABC):
    """A closed subset of the complex plane, thickened by a tolerance."""

    @abstractmethod
    def distance(self, z: np.ndarray) -> np.ndarray:
        """Distance from each point of z to the region."""

    def contains(self, z, tolerance: float = 1e-6) -> np.ndarray:
        return self.distance(np.asarray(z, dtype=complex)) <= tolerance


@dataclass(frozen=True)
class Disk(Region):
    radius: float

    def distance(self, z):
        return np.maximum(np.abs(z) - self.radius, 0.0)


@dataclass(frozen=True)
class LineTreeRegion(Region):
    """The points +1 and -1 together with the circle of radius sqrt(k)."""

    k: float

    def distance(self, z):
        return np.minimum.reduce([np.abs(z - 1), np.abs(z + 1), np.abs(np.abs(z) - np.sqrt(self.k))])


@dataclass(frozen=True)
class TwoCircles(Region):
    """Circles of radius k**(1/4) and sqrt(k)."""

    k: float

    def distance(self, z):
        r = np.abs(z)
        return np.minimum(np.abs(r - self.k ** 0.25), np.abs(r - np.sqrt(self.k)))


_REGION_RE = re.compile(r"^(disk|line-tree|two-circles):([0-9.eE+-]+)$")


def parse_region(text: str) -> Region:
    """Parse ``disk:R``, ``line-tree:k`` or ``two-circles:k``."""
    match = _REGION_RE.match(text.strip())
    if not match:
        raise ValueError(f"Unknown region {text!r}; use disk:R, line-tree:k or two-circles:k")
    kind, value = match.group(1), float(match.group(2))
    return {"disk": Disk, "line-tree": LineTreeRegion, "two-circles": TwoCircles}[kind](value)


def spectrum_in_region(report: SpectrumReport, region: Region, tolerance: float = 1e-6) -> bool:
    """True iff every nontrivial eigenvalue is within tolerance of the region."""
    return bool(np.all(region.contains(report.nontrivial, tolerance)))


def multiset_distance(a: Sequence[complex], b: Sequence[complex]) -> float:
    """
    Largest pair distance under a minimum-cost perfect matching of two complex multisets.

    Raises:
        ValueError: If the multisets differ in size
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if len(a) != len(b):
        raise ValueError(f"Multisets differ in size: {len(a)} vs {len(b)}")
    if not len(a):
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())
