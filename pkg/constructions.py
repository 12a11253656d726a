"""
Generators for the digraph and graph families used throughout the toolkit.

Every generator is a pure function of its arguments (and seed, where one is
taken); randomized constructions draw from numpy's PCG64 bit generator so a
given seed reproduces the same digraph on every platform.
"""

import re
import logging
from itertools import product
from typing import Callable, Dict, List, Tuple

import numpy as np
import networkx as nx

from algebra import is_prime, legendre
from digraph import Digraph, DigraphError, NonRegular, UGraph, strongly_connected

logger = logging.getLogger(__name__)


class BadPrime(DigraphError):
    """The modulus is not a prime of the required residue class."""


class HasLoopOrMultiEdge(DigraphError):
    """A construction that needs a simple graph was given a multigraph."""


class UnknownName(DigraphError):
    """No built-in graph goes by that name."""


def rng_for(seed: int) -> np.random.Generator:
    """The seeded generator used by every randomized routine."""
    return np.random.Generator(np.random.PCG64(seed))


def complete_digraph(k: int, m: int = 1) -> Digraph:
    """
    Complete k-regular m-periodic digraph on Z/m x [k].

    Vertex (x, y) has index x*k + y and sends one edge to every (x+1, z).
    """
    if k < 1 or m < 1:
        raise NonRegular(f"complete_digraph needs k >= 1 and m >= 1, got k={k}, m={m}")
    n = k * m
    x = np.arange(n) // k
    src = np.repeat(np.arange(n), k)
    dst = (((x + 1) % m) * k)[src] + np.tile(np.arange(k), n)
    return Digraph.from_arrays(n, src, dst)


def paley_digraph(p: int) -> Digraph:
    """
    Paley digraph on F_p: a -> b iff b - a is a nonzero square.

    Raises:
        BadPrime: If p is not a prime congruent to 3 mod 4
    """
    if not is_prime(p) or p % 4 != 3:
        raise BadPrime(f"Paley digraph needs a prime p = 3 mod 4, got {p}")
    squares = np.array([a for a in range(1, p) if legendre(a, p) == 1], dtype=np.int64)
    src = np.repeat(np.arange(p), len(squares))
    dst = (src + np.tile(squares, p)) % p
    return Digraph.from_arrays(p, src, dst)


def projective_points(p: int, dim: int) -> np.ndarray:
    """Nonzero vectors of F_p^dim whose first nonzero coordinate is 1, in lexicographic order."""
    vectors = np.array(list(product(range(p), repeat=dim)), dtype=np.int64)
    nonzero = vectors.any(axis=1)
    vectors = vectors[nonzero]
    lead = vectors[np.arange(len(vectors)), np.argmax(vectors != 0, axis=1)]
    return vectors[lead == 1]


def projective_incidence(p: int, d: int) -> Digraph:
    """
    Point-hyperplane incidence digraph of P^d(F_p), with edges in both directions.

    Points get indices 0..N-1 and hyperplanes N..2N-1. A hyperplane is stored
    by its normalized normal vector w; point v lies on it iff w . v = 0.

    Raises:
        BadPrime: If p is not prime
    """
    if not is_prime(p):
        raise BadPrime(f"Projective space needs a prime field, got p={p}")
    if d < 2:
        raise NonRegular(f"Projective incidence needs d >= 2, got {d}")
    points = projective_points(p, d + 1)
    N = len(points)
    incident = (points @ points.T) % p == 0
    rows, cols = np.nonzero(incident)
    src = np.concatenate([rows, cols + N])
    dst = np.concatenate([cols + N, rows])
    D = Digraph.from_arrays(2 * N, src, dst)
    logger.debug(f"Projective incidence p={p}, d={d}: n={D.n}, k={D.k}")
    return D


def de_bruijn(k: int, s: int) -> Digraph:
    """De Bruijn digraph on words [k]^s: (a1..as) -> (a2..as, t); words indexed in base k."""
    if k < 2 or s < 1:
        raise NonRegular(f"de_bruijn needs k >= 2 and s >= 1, got k={k}, s={s}")
    n = k ** s
    src = np.repeat(np.arange(n), k)
    dst = (src * k) % n + np.tile(np.arange(k), n)
    return Digraph.from_arrays(n, src, dst)


def line_digraph(G: UGraph) -> Tuple[Digraph, np.ndarray]:
    """
    Non-backtracking line digraph of a simple (k+1)-regular graph.

    Vertices are the directed edges (v, w) of G in CSR order; (v, w) -> (w, u)
    for every neighbour u != v of w.

    Returns:
        (digraph, labels) with labels[i] = (v, w)

    Raises:
        HasLoopOrMultiEdge: If G is not simple
        NonRegular: If G has degree below 2
    """
    if not G.is_simple():
        raise HasLoopOrMultiEdge(f"{G!r} has loops or parallel edges")
    if G.k < 2:
        raise NonRegular(f"Line digraph needs degree >= 2, got {G.k}")
    A = G.matrix()
    indptr, indices = A.indptr, A.indices
    tails = np.repeat(np.arange(G.n), np.diff(indptr))
    heads = indices.astype(np.int64)

    src, dst = [], []
    for arc, (v, w) in enumerate(zip(tails, heads)):
        for nxt in range(indptr[w], indptr[w + 1]):
            if indices[nxt] != v:
                src.append(arc)
                dst.append(nxt)
    D = Digraph.from_arrays(len(heads), src, dst)
    labels = np.column_stack([tails, heads])
    return D, labels


def random_regular_digraph(n: int, k: int, seed: int) -> Digraph:
    """
    Permutation model: adjacency is the sum of k independent uniform permutation matrices.

    Loops and parallel edges are kept.
    """
    if n < 1 or k < 1:
        raise NonRegular(f"random_regular_digraph needs n >= 1 and k >= 1, got n={n}, k={k}")
    rng = rng_for(seed)
    src = np.tile(np.arange(n), k)
    dst = np.concatenate([rng.permutation(n) for _ in range(k)])
    return Digraph.from_arrays(n, src, dst)


_BUILTINS: Dict[str, Callable[..., nx.Graph]] = {
    "complete": nx.complete_graph,
    "cycle": nx.cycle_graph,
    "petersen": nx.petersen_graph,
    "complete_bipartite": nx.complete_bipartite_graph,
    "prism": nx.circular_ladder_graph,
    "hypercube": nx.hypercube_graph,
    "dodecahedron": nx.dodecahedral_graph,
    "random_regular": lambda d, n, seed=0: nx.random_regular_graph(d, n, seed=seed),
}

_NAME_RE = re.compile(r"^([a-z_]+)(?:\(([\d,\s]*)\))?$")


def builtin_graph(name: str) -> UGraph:
    """
    Named regular graph, e.g. ``complete(4)``, ``cycle(10)``, ``petersen``,
    ``complete_bipartite(3,3)``, ``prism(17)``, ``hypercube(3)``,
    ``dodecahedron``, ``random_regular(3,60,7)``.

    Raises:
        UnknownName: If the name or its arguments are not recognized
    """
    match = _NAME_RE.match(name.strip())
    if not match or match.group(1) not in _BUILTINS:
        raise UnknownName(f"Unknown graph {name!r}; known: {', '.join(sorted(_BUILTINS))}")
    args = [int(a) for a in (match.group(2) or "").split(",") if a.strip()]
    try:
        graph = _BUILTINS[match.group(1)](*args)
    except (TypeError, ValueError, nx.NetworkXError) as e:
        raise UnknownName(f"Bad arguments for {name!r}: {e}") from e
    return UGraph.from_networkx(graph)


def strongly_connected_random(n: int, k: int, seed: int, attempts: int = 100) -> Tuple[Digraph, int]:
    """First strongly connected sample of the permutation model at seeds seed, seed+1, ..."""
    for offset in range(attempts):
        D = random_regular_digraph(n, k, seed + offset)
        if strongly_connected(D):
            return D, seed + offset
    raise NonRegular(f"No strongly connected sample for n={n}, k={k} in {attempts} seeds")


def digraph_corpus() -> List[Tuple[str, Digraph]]:
    """Small digraphs with known spectral behaviour, all strongly connected."""
    corpus: List[Tuple[str, Digraph]] = [
        ("complete_digraph(1,3)", complete_digraph(1, 3)),
        ("complete_digraph(2,1)", complete_digraph(2, 1)),
        ("complete_digraph(2,3)", complete_digraph(2, 3)),
        ("complete_digraph(3,1)", complete_digraph(3, 1)),
        ("complete_digraph(3,4)", complete_digraph(3, 4)),
        ("paley(7)", paley_digraph(7)),
        ("paley(11)", paley_digraph(11)),
        ("paley(19)", paley_digraph(19)),
        ("projective_incidence(2,2)", projective_incidence(2, 2)),
        ("projective_incidence(3,2)", projective_incidence(3, 2)),
        ("projective_incidence(2,3)", projective_incidence(2, 3)),
        ("de_bruijn(2,3)", de_bruijn(2, 3)),
        ("de_bruijn(3,2)", de_bruijn(3, 2)),
        ("de_bruijn(2,4)", de_bruijn(2, 4)),
    ]
    for name in ("complete(4)", "petersen", "complete_bipartite(3,3)", "prism(17)"):
        corpus.append((f"line_digraph({name})", line_digraph(builtin_graph(name))[0]))
    for n, k, seed in ((20, 3, 1), (30, 2, 2)):
        D, used = strongly_connected_random(n, k, seed)
        corpus.append((f"random_regular_digraph({n},{k},{used})", D))
    return corpus


def graph_corpus() -> List[Tuple[str, UGraph]]:
    """Connected regular graphs; prism(16) and prism(17) are not Ramanujan."""
    names = [
        "complete(4)", "complete(5)", "complete(6)", "petersen",
        "complete_bipartite(3,3)", "complete_bipartite(4,4)", "cycle(10)",
        "prism(16)", "prism(17)", "hypercube(3)", "dodecahedron",
    ]
    return [(name, builtin_graph(name)) for name in names]
