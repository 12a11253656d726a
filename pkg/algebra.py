"""
Finite fields, projective matrix groups and Cayley digraphs.

Field elements are integers 0..q-1 encoding the coefficient vector
c_0 + c_1 x + ... + c_{e-1} x^{e-1} as sum(c_i * p**i). Prime fields use plain
modular arithmetic; extension fields use precomputed addition and
multiplication tables so whole batches of matrices can be multiplied with
numpy fancy indexing.
"""

import re
import logging
from dataclasses import dataclass, field as dataclass_field
from functools import lru_cache, reduce
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from config import config
from digraph import Digraph, DigraphError

logger = logging.getLogger(__name__)

MAX_PRIME_FIELD = 2 ** 20
MAX_EXTENSION_ORDER = 1024
MAX_EXTENSION_DEGREE = 4


class FieldError(DigraphError):
    """Non-prime characteristic, reducible modulus or out-of-range coefficient."""


class SingularMatrix(DigraphError):
    """A matrix meant to represent a group element has zero determinant."""


class ClosureBudgetExceeded(DigraphError):
    """The generated group is larger than the configured cap."""


class GeneratorFormatError(DigraphError):
    """A generator file is malformed."""


def is_prime(n: int) -> bool:
    """Deterministic primality test by trial division (6k +- 1 wheel)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    i = 5
    while i * i <= n:
        if n % i == 0 or n % (i + 2) == 0:
            return False
        i += 6
    return True


def legendre(a, p: int) -> int:
    """
    Legendre symbol of a modulo the odd prime p.

    Args:
        a: Integer or single-coefficient FieldElem
        p: Prime

    Returns:
        0 if a == 0 mod p, +1 for nonzero squares, -1 otherwise
    """
    if isinstance(a, FieldElem):
        if len(a.coeffs) != 1:
            raise FieldError("Legendre symbol is defined here for prime-field elements only")
        a = a.coeffs[0]
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


# Polynomials over F_p as ascending coefficient lists

def _poly_trim(a: List[int]) -> List[int]:
    while len(a) > 1 and a[-1] == 0:
        a = a[:-1]
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> List[int]:
    a = _poly_trim([c % p for c in a])
    m = _poly_trim([c % p for c in m])
    lead_inv = pow(m[-1], p - 2, p)
    while len(a) >= len(m) and any(a):
        factor = (a[-1] * lead_inv) % p
        shift = len(a) - len(m)
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - factor * c) % p
        a = _poly_trim(a)
    return a


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial-divide by every monic polynomial of degree up to deg/2."""
    degree = len(_poly_trim(list(modulus))) - 1
    if degree < 1:
        return False
    for d in range(1, degree // 2 + 1):
        for code in range(p ** d):
            divisor = [(code // p ** i) % p for i in range(d)] + [1]
            if not any(_poly_mod(modulus, divisor, p)):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """
    The field F_p[x] / (modulus) of order p**e.

    Attributes:
        p: Prime characteristic
        e: Extension degree
        modulus: Ascending coefficients of a degree-e irreducible polynomial
    """

    p: int
    e: int = 1
    modulus: Tuple[int, ...] = (0, 1)

    def __post_init__(self):
        if not is_prime(self.p):
            raise FieldError(f"Characteristic {self.p} is not prime")
        if not 1 <= self.e <= MAX_EXTENSION_DEGREE:
            raise FieldError(f"Extension degree {self.e} outside 1..{MAX_EXTENSION_DEGREE}")
        object.__setattr__(self, "modulus", tuple(int(c) for c in self.modulus))
        if len(self.modulus) != self.e + 1:
            raise FieldError(f"Modulus {list(self.modulus)} must have {self.e + 1} coefficients")
        if any(not 0 <= c < self.p for c in self.modulus):
            raise FieldError(f"Modulus coefficients must lie in 0..{self.p - 1}")
        if self.modulus[-1] == 0:
            raise FieldError("Modulus leading coefficient is zero")
        if self.e > 1 and not is_irreducible(self.modulus, self.p):
            raise FieldError(f"Modulus {list(self.modulus)} is reducible over F_{self.p}")

    @classmethod
    def prime(cls, p: int) -> 'FieldSpec':
        return cls(p=p, e=1, modulus=(0, 1))

    @property
    def q(self) -> int:
        return self.p ** self.e

    def __str__(self) -> str:
        if self.e == 1:
            return f"F_{self.p}"
        return f"F_{self.p}^{self.e} mod {list(self.modulus)}"


@dataclass(frozen=True)
class FieldElem:
    """Polynomial-residue representation: e coefficients in 0..p-1."""

    coeffs: Tuple[int, ...]


class FiniteField:
    """
    Arithmetic on integer-encoded elements of a FieldSpec.

    Scalar and array arguments are both accepted by add/mul/neg/inv.
    """

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.p = spec.p
        self.e = spec.e
        self.q = spec.q

        if self.e == 1:
            if self.p > MAX_PRIME_FIELD:
                raise FieldError(f"Prime field order {self.p} exceeds {MAX_PRIME_FIELD}")
            inv = np.zeros(self.p, dtype=np.int64)
            inv[1:] = [pow(a, self.p - 2, self.p) for a in range(1, self.p)]
            self._inv = inv
            self._add = self._mul = None
        else:
            if self.q > MAX_EXTENSION_ORDER:
                raise FieldError(f"Extension field order {self.q} exceeds {MAX_EXTENSION_ORDER}")
            self._build_tables()
        logger.debug(f"Initialized field {spec} of order {self.q}")

    def _build_tables(self) -> None:
        p, e, q = self.p, self.e, self.q
        powers = p ** np.arange(e, dtype=np.int64)
        coeffs = (np.arange(q, dtype=np.int64)[:, None] // powers) % p

        self._add = ((coeffs[:, None, :] + coeffs[None, :, :]) % p) @ powers

        # convolution of coefficient vectors, then reduction by the modulus
        prod = np.zeros((q, q, 2 * e - 1), dtype=np.int64)
        for i in range(e):
            for j in range(e):
                prod[:, :, i + j] += coeffs[:, None, i] * coeffs[None, :, j]
        prod %= p
        modulus = np.array(self.spec.modulus, dtype=np.int64)
        monic = (modulus * pow(int(modulus[-1]), p - 2, p)) % p
        for degree in range(2 * e - 2, e - 1, -1):
            lead = prod[:, :, degree].copy()
            for i in range(e + 1):
                prod[:, :, degree - e + i] = (prod[:, :, degree - e + i] - lead * monic[i]) % p
        self._mul = prod[:, :, :e] @ powers

        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = np.argmax(self._mul[1:] == 1, axis=1)
        self._inv = inv

    def add(self, a, b):
        if self.e == 1:
            return (np.asarray(a) + np.asarray(b)) % self.p
        return self._add[a, b]

    def mul(self, a, b):
        if self.e == 1:
            return (np.asarray(a, dtype=np.int64) * np.asarray(b, dtype=np.int64)) % self.p
        return self._mul[a, b]

    def neg(self, a):
        if self.e == 1:
            return (-np.asarray(a)) % self.p
        coeffs = self.coefficients(a)
        return self.from_coefficients((-coeffs) % self.p)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def inv(self, a):
        """
        Multiplicative inverse.

        Raises:
            FieldError: If any argument is zero
        """
        a = np.asarray(a)
        if np.any(a == 0):
            raise FieldError("Zero has no multiplicative inverse")
        return self._inv[a]

    def coefficients(self, a) -> np.ndarray:
        """Coefficient vectors (trailing axis of length e) of encoded elements."""
        powers = self.p ** np.arange(self.e, dtype=np.int64)
        return (np.asarray(a, dtype=np.int64)[..., None] // powers) % self.p

    def from_coefficients(self, coeffs) -> np.ndarray:
        powers = self.p ** np.arange(self.e, dtype=np.int64)
        return np.asarray(coeffs, dtype=np.int64) @ powers

    def element(self, value) -> int:
        """
        Encode an int, a FieldElem or a coefficient sequence as an element index.

        Raises:
            FieldError: If a coefficient is out of range or too many are given
        """
        if isinstance(value, FieldElem):
            value = value.coeffs
        if isinstance(value, (int, np.integer)):
            if self.e == 1:
                return int(value) % self.p
            if not 0 <= value < self.p:
                raise FieldError(f"Constant {value} outside 0..{self.p - 1}")
            return int(value)
        coeffs = [int(c) for c in value]
        if len(coeffs) > self.e or any(not 0 <= c < self.p for c in coeffs):
            raise FieldError(f"Coefficients {coeffs} invalid for {self.spec}")
        return sum(c * self.p ** i for i, c in enumerate(coeffs))

    def elem(self, index: int) -> FieldElem:
        return FieldElem(tuple(int(c) for c in self.coefficients(index)))

    def matmul(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """Batched matrix product over the field; leading axes broadcast."""
        if self.e == 1:
            return np.matmul(X, Y) % self.p
        prods = self._mul[X[..., :, :, None], Y[..., None, :, :]]
        return reduce(lambda acc, t: self._add[acc, prods[..., t, :]],
                      range(1, prods.shape[-2]), prods[..., 0, :])

    def det(self, M: np.ndarray) -> int:
        """Determinant by Gaussian elimination."""
        A = np.array(M, dtype=np.int64)
        d = A.shape[0]
        det = 1
        for col in range(d):
            pivots = np.flatnonzero(A[col:, col])
            if len(pivots) == 0:
                return 0
            row = col + int(pivots[0])
            if row != col:
                A[[col, row]] = A[[row, col]]
                det = int(self.neg(det))
            pivot = int(A[col, col])
            det = int(self.mul(det, pivot))
            pivot_inv = int(self.inv(pivot))
            for r in range(col + 1, d):
                if A[r, col]:
                    factor = int(self.mul(A[r, col], pivot_inv))
                    A[r] = self.sub(A[r], self.mul(factor, A[col]))
        return det

    def inverse(self, M: np.ndarray) -> np.ndarray:
        """
        Matrix inverse by Gauss-Jordan elimination.

        Raises:
            SingularMatrix: If M is not invertible
        """
        A = np.array(M, dtype=np.int64)
        d = A.shape[0]
        B = np.zeros_like(A)
        B[np.arange(d), np.arange(d)] = 1
        for col in range(d):
            pivots = np.flatnonzero(A[col:, col])
            if len(pivots) == 0:
                raise SingularMatrix("Matrix is singular")
            row = col + int(pivots[0])
            A[[col, row]] = A[[row, col]]
            B[[col, row]] = B[[row, col]]
            pivot_inv = int(self.inv(A[col, col]))
            A[col] = self.mul(pivot_inv, A[col])
            B[col] = self.mul(pivot_inv, B[col])
            for r in range(d):
                if r != col and A[r, col]:
                    factor = int(A[r, col])
                    A[r] = self.sub(A[r], self.mul(factor, A[col]))
                    B[r] = self.sub(B[r], self.mul(factor, B[col]))
        return B

    def identity(self, d: int) -> np.ndarray:
        return np.eye(d, dtype=np.int64)


@lru_cache(maxsize=None)
def finite_field(spec: FieldSpec) -> FiniteField:
    """Return the (cached) arithmetic object for a FieldSpec."""
    return FiniteField(spec)


def _as_field(field: Union[FieldSpec, FiniteField]) -> FiniteField:
    return field if isinstance(field, FiniteField) else finite_field(field)


@dataclass(frozen=True)
class ProjMatrix:
    """
    Invertible d x d matrix up to scalars, stored in canonical form.

    Attributes:
        field: The underlying FieldSpec
        d: Dimension
        entries: Row-major element indices with first nonzero entry 1
    """

    field: FieldSpec
    d: int
    entries: Tuple[Tuple[int, ...], ...] = dataclass_field(repr=False)

    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)

    def key(self) -> bytes:
        return self.array().tobytes()


def canonical_batch(field: FiniteField, X: np.ndarray) -> np.ndarray:
    """Scale each matrix of a (B, d, d) batch by the inverse of its first nonzero entry."""
    B, d, _ = X.shape
    flat = X.reshape(B, d * d)
    lead = flat[np.arange(B), np.argmax(flat != 0, axis=1)]
    scaled = field.mul(field.inv(lead)[:, None], flat)
    return np.asarray(scaled, dtype=np.int64).reshape(B, d, d)


def proj_canonical(M, field: Union[FieldSpec, FiniteField]) -> ProjMatrix:
    """
    Canonical projective representative of an invertible matrix.

    Args:
        M: d x d nested sequence of ints, coefficient lists or FieldElems
        field: Field the entries live in

    Returns:
        ProjMatrix whose first nonzero row-major entry is 1

    Raises:
        SingularMatrix: If det(M) == 0
    """
    F = _as_field(field)
    rows = [list(row) for row in M]
    d = len(rows)
    if any(len(row) != d for row in rows):
        raise SingularMatrix(f"Matrix must be square, got rows of lengths {[len(r) for r in rows]}")
    A = np.array([[F.element(x) for x in row] for row in rows], dtype=np.int64)
    return _proj_from_indices(A, F)


def _proj_from_indices(A: np.ndarray, F: FiniteField) -> ProjMatrix:
    if F.det(A) == 0:
        raise SingularMatrix(f"Matrix {A.tolist()} is singular over {F.spec}")
    canon = canonical_batch(F, A[None])[0]
    return ProjMatrix(field=F.spec, d=A.shape[0], entries=tuple(tuple(int(x) for x in row) for row in canon))


def proj_multiply(a: ProjMatrix, b: ProjMatrix) -> ProjMatrix:
    """Product in PGL_d, in canonical form."""
    F = finite_field(a.field)
    prod = canonical_batch(F, F.matmul(a.array(), b.array())[None])[0]
    return ProjMatrix(field=a.field, d=a.d, entries=tuple(tuple(int(x) for x in row) for row in prod))


def group_closure(field: Union[FieldSpec, FiniteField], generators: Sequence[ProjMatrix],
                  cap: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Enumerate the group generated by projective matrices.

    Breadth-first by frontier layers from the identity (index 0); within a
    layer, elements are expanded in index order and generators in list order.

    Args:
        field: Field of the entries
        generators: Nonempty list of canonical matrices of equal dimension
        cap: Maximum group order; defaults to config.CLOSURE_CAP

    Returns:
        (elements, successors): (N, d, d) canonical matrices in BFS order and
        the (N, |S|) table with successors[g, s] = index of g * S[s]

    Raises:
        ClosureBudgetExceeded: If more than cap elements are found
    """
    F = _as_field(field)
    cap = config.CLOSURE_CAP if cap is None else cap
    if not generators:
        raise GeneratorFormatError("At least one generator is required")
    d = generators[0].d
    S = np.stack([g.array() for g in generators])

    identity = canonical_batch(F, F.identity(d)[None])
    elements: List[np.ndarray] = [identity]
    index: Dict[bytes, int] = {identity[0].tobytes(): 0}
    successors: List[np.ndarray] = []
    frontier = identity
    total = 1

    while len(frontier):
        products = F.matmul(frontier[:, None, :, :], S[None, :, :, :])
        products = canonical_batch(F, products.reshape(-1, d, d))
        targets = np.empty(len(products), dtype=np.int64)
        fresh = []
        for i, prod in enumerate(products):
            key = prod.tobytes()
            found = index.get(key)
            if found is None:
                found = total
                index[key] = found
                fresh.append(prod)
                total += 1
                if total > cap:
                    raise ClosureBudgetExceeded(
                        f"Group closure exceeded {cap} elements; check field and generators"
                    )
            targets[i] = found
        successors.append(targets.reshape(len(frontier), len(S)))
        frontier = np.stack(fresh) if fresh else np.empty((0, d, d), dtype=np.int64)
        if len(frontier):
            elements.append(frontier)
        logger.debug(f"Closure layer: {len(fresh)} new elements, {total} total")

    logger.info(f"Group closure over {F.spec}, d={d}: {total} elements")
    return np.concatenate(elements), np.concatenate(successors)


def cayley_digraph(field: Union[FieldSpec, FiniteField], d: int,
                   generators: Sequence[ProjMatrix],
                   cap: Optional[int] = None) -> Tuple[Digraph, np.ndarray]:
    """
    Right Cayley digraph of the group generated by ``generators``.

    Edges are g -> g*s, one per generator, so the result is |S|-regular with
    multiplicity.

    Returns:
        (digraph, labels) where labels[v] is the canonical matrix of vertex v

    Raises:
        SingularMatrix: If a generator has the wrong dimension
        ClosureBudgetExceeded: If the group exceeds the cap
    """
    for g in generators:
        if g.d != d:
            raise SingularMatrix(f"Generator of dimension {g.d} given for d={d}")
    labels, successors = group_closure(field, generators, cap=cap)
    N, S = successors.shape
    D = Digraph.from_arrays(N, np.repeat(np.arange(N), S), successors.ravel())
    return D, labels


def label_index(labels: np.ndarray) -> Dict[bytes, int]:
    """Map canonical-matrix bytes to vertex index."""
    return {label.tobytes(): i for i, label in enumerate(labels)}


def left_translation(field: Union[FieldSpec, FiniteField], labels: np.ndarray, h: ProjMatrix) -> np.ndarray:
    """
    Vertex permutation g -> h*g of a Cayley digraph.

    Left and right multiplication commute, so the permutation is an
    automorphism of the right Cayley digraph.

    Raises:
        GeneratorFormatError: If h is not an element of the enumerated group
    """
    F = _as_field(field)
    index = label_index(labels)
    products = canonical_batch(F, F.matmul(h.array()[None], np.asarray(labels, dtype=np.int64)))
    image = np.empty(len(labels), dtype=np.int64)
    for v, prod in enumerate(products):
        found = index.get(prod.tobytes())
        if found is None:
            raise GeneratorFormatError(f"Matrix {h.array().tolist()} is not in the group")
        image[v] = found
    return image


# Generator files

_FIELD_RE = re.compile(r"^field\s+p=(\d+)\s+e=(\d+)\s+mod=\[([\d,\s]*)\]$")
_ENTRY_RE = re.compile(r"\[[^\]]*\]|[^\s\[\]]+")


@dataclass(frozen=True)
class GeneratorSet:
    """Parsed generator file: field, dimension and canonical generators."""

    field: FieldSpec
    d: int
    generators: Tuple[ProjMatrix, ...]


def _parse_entry(token: str, F: FiniteField, lineno: int) -> int:
    try:
        if token.startswith("["):
            inner = token[1:-1].strip()
            coeffs = [int(c) for c in inner.split(",")] if inner else []
            return F.element(coeffs)
        return F.element(int(token))
    except (ValueError, FieldError) as e:
        raise GeneratorFormatError(f"Line {lineno}: bad entry {token!r}: {e}") from e


def parse_generators(text: str, dim: Optional[int] = None) -> GeneratorSet:
    """
    Parse the generator-file format.

    The first non-comment line is ``field p=<p> e=<e> mod=[c0,...,ce]``; every
    following line holds one matrix, entries row-major separated by spaces.
    Prime-field entries are integers; extension entries are ``[c0,c1,...]``
    (ascending coefficients) or plain constants.

    Raises:
        GeneratorFormatError: On malformed header, entries or dimensions
    """
    lines = [(i, line.split("#", 1)[0].strip()) for i, line in enumerate(text.splitlines(), start=1)]
    lines = [(i, line) for i, line in lines if line]
    if not lines:
        raise GeneratorFormatError("Empty generator file")

    lineno, header = lines[0]
    match = _FIELD_RE.match(header)
    if not match:
        raise GeneratorFormatError(f"Line {lineno}: bad field header {header!r}")
    p, e = int(match.group(1)), int(match.group(2))
    modulus = tuple(int(c) for c in match.group(3).split(",") if c.strip())
    try:
        spec = FieldSpec(p=p, e=e, modulus=modulus)
    except FieldError as err:
        raise GeneratorFormatError(f"Line {lineno}: {err}") from err
    F = finite_field(spec)

    generators: List[ProjMatrix] = []
    d = dim
    for lineno, line in lines[1:]:
        tokens = _ENTRY_RE.findall(line)
        size = int(round(len(tokens) ** 0.5))
        if size * size != len(tokens) or size < 1:
            raise GeneratorFormatError(f"Line {lineno}: {len(tokens)} entries is not a square count")
        if d is None:
            d = size
        if size != d:
            raise GeneratorFormatError(f"Line {lineno}: {size}x{size} matrix, expected {d}x{d}")
        values = [_parse_entry(t, F, lineno) for t in tokens]
        A = np.array(values, dtype=np.int64).reshape(d, d)
        try:
            generators.append(_proj_from_indices(A, F))
        except SingularMatrix as err:
            raise GeneratorFormatError(f"Line {lineno}: {err}") from err

    if not generators:
        raise GeneratorFormatError("No generator matrices found")
    return GeneratorSet(field=spec, d=d, generators=tuple(generators))


def read_generators(path: Union[str, Path], dim: Optional[int] = None) -> GeneratorSet:
    with open(path, "r") as f:
        return parse_generators(f.read(), dim=dim)
