"""
Finite regular multidigraphs and undirected regular multigraphs.

A Digraph stores its adjacency as a CSR matrix of integer multiplicities, so
loops and parallel edges are first class. Instances are validated on
construction (every in- and out-degree equals k) and are immutable afterwards.
"""

import re
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

import version
from config import config
from artifacts import atomic_write_text

logger = logging.getLogger(__name__)

MAX_MULTIPLICITY = 2 ** 62


class DigraphError(Exception):
    """Base class for every error raised by the toolkit."""


class NonRegular(DigraphError):
    """Some in- or out-degree differs from the others."""


class NotStronglyConnected(DigraphError):
    """The digraph has an ordered vertex pair with no directed path."""


class MultiplicityOverflow(DigraphError):
    """An edge multiplicity exceeds the representable range."""


class EdgeListFormatError(DigraphError):
    """An edge-list file deviates from the bit-exact format."""


class TooLarge(DigraphError):
    """The instance exceeds a configured size threshold."""


def _freeze(matrix: sp.csr_matrix) -> sp.csr_matrix:
    for arr in (matrix.data, matrix.indices, matrix.indptr):
        arr.flags.writeable = False
    return matrix


def _as_csr(n: int, src, dst, mult) -> sp.csr_matrix:
    matrix = sp.coo_matrix((np.asarray(mult, dtype=np.int64),
                            (np.asarray(src, dtype=np.int64), np.asarray(dst, dtype=np.int64))),
                           shape=(n, n)).tocsr()
    matrix.sum_duplicates()
    matrix.eliminate_zeros()
    matrix.sort_indices()
    return matrix


class Digraph:
    """
    A k-regular multidigraph on vertices 0..n-1.

    Attributes:
        n: Vertex count
        k: Common in- and out-degree, counting multiplicity
    """

    def __init__(self, matrix: sp.spmatrix):
        """
        Wrap a square nonnegative integer matrix after validating regularity.

        Args:
            matrix: Adjacency with A[u, v] = number of edges u -> v

        Raises:
            NonRegular: If degrees are not all equal or the matrix is malformed
        """
        matrix = sp.csr_matrix(matrix, dtype=np.int64, copy=True)
        n_rows, n_cols = matrix.shape
        if n_rows != n_cols or n_rows < 1:
            raise NonRegular(f"Adjacency must be a nonempty square matrix, got shape {matrix.shape}")
        matrix.sum_duplicates()
        matrix.eliminate_zeros()
        matrix.sort_indices()
        if matrix.nnz and matrix.data.min() < 0:
            raise NonRegular("Edge multiplicities must be nonnegative")

        out_deg = np.asarray(matrix.sum(axis=1)).ravel()
        in_deg = np.asarray(matrix.sum(axis=0)).ravel()
        k = int(out_deg[0])
        if k < 1 or np.any(out_deg != k) or np.any(in_deg != k):
            bad = int(np.flatnonzero((out_deg != k) | (in_deg != k))[0]) if k >= 1 else 0
            raise NonRegular(
                f"Vertex {bad} has out-degree {int(out_deg[bad])} and in-degree {int(in_deg[bad])}, "
                f"expected {k} for both"
            )

        self.n = n_rows
        self.k = k
        self._matrix = _freeze(matrix)
        self._out_table: Optional[np.ndarray] = None

    @classmethod
    def from_arrays(cls, n: int, src: Sequence[int], dst: Sequence[int],
                    mult: Optional[Sequence[int]] = None) -> 'Digraph':
        """Build a digraph from parallel arrays of edge endpoints and multiplicities."""
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        if mult is None:
            mult = np.ones(len(src), dtype=np.int64)
        if len(src) and (src.min() < 0 or dst.min() < 0 or src.max() >= n or dst.max() >= n):
            raise NonRegular(f"Edge endpoint outside 0..{n - 1}")
        return cls(_as_csr(n, src, dst, mult))

    def matrix(self) -> sp.csr_matrix:
        """Return the read-only CSR adjacency (integer multiplicities)."""
        return self._matrix

    def dense(self, dtype=np.float64, threshold: Optional[int] = None) -> np.ndarray:
        """
        Materialize the adjacency as a dense array.

        Raises:
            TooLarge: If n exceeds the dense threshold
        """
        limit = config.DENSE_THRESHOLD if threshold is None else threshold
        if self.n > limit:
            raise TooLarge(f"n={self.n} exceeds the dense threshold {limit}")
        return self._matrix.toarray().astype(dtype)

    def out_table(self) -> np.ndarray:
        """Return the n x k successor table, each successor repeated by multiplicity."""
        if self._out_table is None:
            table = np.repeat(self._matrix.indices, self._matrix.data).reshape(self.n, self.k)
            table.flags.writeable = False
            self._out_table = table
        return self._out_table

    def multiplicity(self, u: int, v: int) -> int:
        """Return the number of edges u -> v."""
        return int(self._matrix[u, v])

    def edges(self) -> Iterator[Tuple[int, int, int]]:
        """Yield (u, v, multiplicity) sorted lexicographically by (u, v)."""
        indptr, indices, data = self._matrix.indptr, self._matrix.indices, self._matrix.data
        for u in range(self.n):
            for pos in range(indptr[u], indptr[u + 1]):
                yield u, int(indices[pos]), int(data[pos])

    def edge_count(self) -> int:
        """Return the number of distinct (u, v) pairs carrying an edge."""
        return int(self._matrix.nnz)

    def loops(self) -> int:
        """Return the total loop multiplicity, i.e. trace(A)."""
        return int(self._matrix.diagonal().sum())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and (self._matrix != other._matrix).nnz == 0

    def __hash__(self) -> int:
        return hash((self.n, self.k, self._matrix.nnz))

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, k={self.k}, edges={self.edge_count()})"


class UGraph:
    """
    A k-regular undirected multigraph with symmetric adjacency.

    Attributes:
        n: Vertex count
        k: Degree
    """

    def __init__(self, matrix: sp.spmatrix):
        matrix = sp.csr_matrix(matrix, dtype=np.int64, copy=True)
        if matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 1:
            raise NonRegular(f"Adjacency must be a nonempty square matrix, got shape {matrix.shape}")
        matrix.sum_duplicates()
        matrix.eliminate_zeros()
        matrix.sort_indices()
        if (matrix != matrix.T).nnz:
            raise NonRegular("Undirected adjacency must be symmetric")
        if matrix.nnz and matrix.data.min() < 0:
            raise NonRegular("Edge multiplicities must be nonnegative")
        degrees = np.asarray(matrix.sum(axis=1)).ravel()
        k = int(degrees[0])
        if np.any(degrees != k):
            bad = int(np.flatnonzero(degrees != k)[0])
            raise NonRegular(f"Vertex {bad} has degree {int(degrees[bad])}, expected {k}")
        self.n = matrix.shape[0]
        self.k = k
        self._matrix = _freeze(matrix)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> 'UGraph':
        """Build a graph from undirected edges {u, v}; repeated pairs add multiplicity."""
        src, dst = [], []
        for u, v in edges:
            src.extend((u, v))
            dst.extend((v, u))
        return cls(_as_csr(n, src, dst, np.ones(len(src), dtype=np.int64)))

    @classmethod
    def from_networkx(cls, graph) -> 'UGraph':
        """Convert a networkx graph, relabelling nodes 0..n-1 in iteration order."""
        import networkx as nx

        relabelled = nx.convert_node_labels_to_integers(graph)
        return cls.from_edges(relabelled.number_of_nodes(), relabelled.edges())

    def to_networkx(self):
        """Return a networkx MultiGraph with the same edges."""
        import networkx as nx

        graph = nx.MultiGraph()
        graph.add_nodes_from(range(self.n))
        upper = sp.triu(self._matrix).tocoo()
        for u, v, mult in zip(upper.row, upper.col, upper.data):
            copies = int(mult) if u != v else int(mult) // 2 or 1
            graph.add_edges_from([(int(u), int(v))] * copies)
        return graph

    def matrix(self) -> sp.csr_matrix:
        return self._matrix

    def dense(self, dtype=np.float64) -> np.ndarray:
        if self.n > config.DENSE_THRESHOLD:
            raise TooLarge(f"n={self.n} exceeds the dense threshold {config.DENSE_THRESHOLD}")
        return self._matrix.toarray().astype(dtype)

    def is_simple(self) -> bool:
        """True if there are no loops and no parallel edges."""
        return not self._matrix.diagonal().any() and bool(np.all(self._matrix.data == 1))

    def edge_count(self) -> int:
        """Return |E| counting multiplicity (loops counted once per unit of A[v, v] / 2)."""
        return int(self._matrix.sum()) // 2

    def as_digraph(self) -> Digraph:
        """Regard each undirected edge as a pair of opposite directed edges."""
        return Digraph(self._matrix)

    def is_connected(self) -> bool:
        n_components, _ = csgraph.connected_components(self._matrix, directed=False)
        return n_components == 1

    def is_bipartite(self) -> bool:
        """True for a connected graph whose vertices 2-colour properly."""
        if not self.is_connected():
            raise NotStronglyConnected("Bipartiteness is only defined here for connected graphs")
        return period(self.as_digraph()).m == 2

    def diameter(self) -> int:
        """Return the largest shortest-path distance (graph must be connected)."""
        if not self.is_connected():
            raise NotStronglyConnected("Diameter of a disconnected graph is infinite")
        dist = csgraph.shortest_path(self._matrix, directed=False, unweighted=True)
        return int(dist.max())

    def __repr__(self) -> str:
        return f"UGraph(n={self.n}, k={self.k}, edges={self.edge_count()})"


@dataclass(frozen=True)
class PeriodData:
    """Period m and the class V_j of every vertex."""

    m: int
    classes: np.ndarray


def from_edge_list(n: int, edges: Iterable[Tuple[int, int, int]]) -> Digraph:
    """
    Build a Digraph from (u, v, mult) triples, summing repeated pairs.

    Args:
        n: Vertex count
        edges: Triples with 0 <= u, v < n and mult >= 1

    Returns:
        Validated Digraph with k cached

    Raises:
        NonRegular: If the degrees differ or an edge is malformed
    """
    if n < 1:
        raise NonRegular(f"Vertex count must be positive, got {n}")
    src, dst, mult = [], [], []
    for u, v, m in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise NonRegular(f"Edge ({u}, {v}) outside vertex range 0..{n - 1}")
        if m < 1:
            raise NonRegular(f"Edge ({u}, {v}) has multiplicity {m} < 1")
        src.append(u)
        dst.append(v)
        mult.append(m)
    return Digraph(_as_csr(n, src, dst, mult))


def strongly_connected(D: Digraph) -> bool:
    """True iff every ordered vertex pair is joined by a directed path."""
    n_components, _ = csgraph.connected_components(D.matrix(), directed=True, connection='strong')
    return n_components == 1


def period(D: Digraph) -> PeriodData:
    """
    Compute the period and the cyclic classes of a strongly connected digraph.

    The period is the gcd of level(u) + 1 - level(v) over all edges u -> v,
    where level is the BFS distance from vertex 0.

    Raises:
        NotStronglyConnected: If D is not strongly connected
    """
    if not strongly_connected(D):
        raise NotStronglyConnected(f"{D!r} is not strongly connected")
    levels = csgraph.shortest_path(D.matrix(), directed=True, unweighted=True, indices=0)
    levels = levels.astype(np.int64)
    coo = D.matrix().tocoo()
    defects = np.abs(levels[coo.row] + 1 - levels[coo.col])
    m = int(np.gcd.reduce(defects)) if len(defects) else 1
    # strong connectivity guarantees a cycle, hence a nonzero defect
    m = max(m, 1)
    return PeriodData(m=m, classes=levels % m)


def symmetrize(D: Digraph) -> UGraph:
    """Return the 2k-regular graph with adjacency A + A^T."""
    A = D.matrix()
    return UGraph(A + A.T)


def transpose(D: Digraph) -> Digraph:
    """Return the reverse digraph."""
    return Digraph(D.matrix().T)


def is_normal(D: Digraph) -> bool:
    """Exact integer check of A A^T == A^T A."""
    A = D.matrix()
    return (A @ A.T != A.T @ A).nnz == 0


def power_digraph(D: Digraph, ell: int) -> Digraph:
    """
    Return the k^ell-regular digraph whose edges are the ell-paths of D.

    Raises:
        ValueError: If ell < 1
        MultiplicityOverflow: If a multiplicity could exceed 2**62
    """
    if ell < 1:
        raise ValueError(f"Path length must be positive, got {ell}")
    if D.k ** ell > MAX_MULTIPLICITY:
        raise MultiplicityOverflow(f"k^ell = {D.k}^{ell} exceeds the multiplicity range")
    A = D.matrix()
    result = A.copy()
    for _ in range(ell - 1):
        result = result @ A
    return Digraph(result)


# Edge-list text format

_HEADER = "#dregular-digraph v{fmt}"
_SIZE_RE = re.compile(r"^n=(0|[1-9]\d*) k=(0|[1-9]\d*) edges=(0|[1-9]\d*)$")
_EDGE_RE = re.compile(r"^(0|[1-9]\d*) (0|[1-9]\d*) ([1-9]\d*)$")


def dumps_edge_list(D: Digraph) -> str:
    """Serialize D in the edge-list format."""
    lines = [_HEADER.format(fmt=version.edge_list_format()),
             f"n={D.n} k={D.k} edges={D.edge_count()}"]
    lines.extend(f"{u} {v} {m}" for u, v, m in D.edges())
    return "\n".join(lines) + "\n"


def loads_edge_list(text: str) -> Digraph:
    """
    Parse the edge-list format, rejecting any deviation.

    Raises:
        EdgeListFormatError: On any syntactic or semantic mismatch
    """
    if not text.endswith("\n"):
        raise EdgeListFormatError("File must end with a newline")
    lines = text[:-1].split("\n")
    expected_header = _HEADER.format(fmt=version.edge_list_format())
    if lines[0] != expected_header:
        raise EdgeListFormatError(f"Bad header {lines[0]!r}, expected {expected_header!r}")
    if len(lines) < 2:
        raise EdgeListFormatError("Missing size line")
    size = _SIZE_RE.match(lines[1])
    if not size:
        raise EdgeListFormatError(f"Bad size line {lines[1]!r}")
    n, k, count = map(int, size.groups())
    body = lines[2:]
    if len(body) != count:
        raise EdgeListFormatError(f"Header announces {count} edges, found {len(body)}")

    edges: List[Tuple[int, int, int]] = []
    previous: Optional[Tuple[int, int]] = None
    for lineno, line in enumerate(body, start=3):
        match = _EDGE_RE.match(line)
        if not match:
            raise EdgeListFormatError(f"Line {lineno}: malformed edge {line!r}")
        u, v, m = map(int, match.groups())
        if previous is not None and (u, v) <= previous:
            raise EdgeListFormatError(f"Line {lineno}: edges not strictly sorted by (u, v)")
        previous = (u, v)
        edges.append((u, v, m))

    try:
        D = from_edge_list(n, edges)
    except NonRegular as e:
        raise EdgeListFormatError(str(e)) from e
    if D.k != k:
        raise EdgeListFormatError(f"Header announces k={k}, edges give k={D.k}")
    if dumps_edge_list(D) != text:
        raise EdgeListFormatError("File does not match its canonical serialization")
    return D


def write_edge_list(D: Digraph, path: Union[str, Path]) -> Path:
    """Write D atomically in the edge-list format."""
    return atomic_write_text(path, dumps_edge_list(D))


def read_edge_list(path: Union[str, Path]) -> Digraph:
    """Read a digraph in the edge-list format."""
    with open(path, "r", newline="") as f:
        return loads_edge_list(f.read())
