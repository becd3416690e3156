"""Prime-field arithmetic and exact linear algebra over F_q.

Vectors and matrices are immutable wrappers around tuples of canonical
residues ``0..q-1``. Heavy lifting is done on ``numpy`` int64 arrays; the
helpers prefixed with ``np_`` operate on raw arrays and are what the
enumeration code uses in its inner loops.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .errors import CapExceeded, Singular

DEFAULT_ENUM_CAP = 2**24
MAX_PRIME = 251


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldContext:
    """The prime field F_q."""

    q: int

    def __post_init__(self):
        if not isinstance(self.q, (int, np.integer)) or not is_prime(int(self.q)):
            raise ValueError(f"q must be prime, got {self.q!r}")
        if self.q > MAX_PRIME:
            raise ValueError(f"q must be at most {MAX_PRIME}, got {self.q}")
        object.__setattr__(self, "q", int(self.q))

    def inv(self, a: int) -> int:
        a %= self.q
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, self.q - 2, self.q)

    def neg(self, a: int) -> int:
        return (-a) % self.q

    def vector(self, entries: Sequence[int]) -> "Vector":
        return Vector(self, tuple(int(e) % self.q for e in entries))

    def zero(self, n: int) -> "Vector":
        return Vector(self, (0,) * n)

    def unit(self, n: int, i: int) -> "Vector":
        """The standard basis vector e_i (1-based index)."""
        if not 1 <= i <= n:
            raise IndexError(f"unit index {i} outside [1, {n}]")
        e = [0] * n
        e[i - 1] = 1
        return Vector(self, tuple(e))

    def matrix(self, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "Matrix":
        rows = tuple(tuple(int(e) % self.q for e in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix rows")
        return Matrix(self, rows, ncols)

    def identity(self, n: int) -> "Matrix":
        return self.matrix(np.eye(n, dtype=np.int64), n)


@dataclass(frozen=True)
class Vector:
    """An element of F_q^n. Coordinates are indexed 1..n in the domain API."""

    context: FieldContext
    entries: tuple[int, ...]

    def __post_init__(self):
        q = self.context.q
        if any(not 0 <= e < q for e in self.entries):
            raise ValueError(f"entries must be residues mod {q}: {self.entries}")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def _check(self, other: "Vector"):
        if other.context != self.context or len(other) != len(self):
            raise ValueError("vectors must share field and length")

    def __add__(self, other: "Vector") -> "Vector":
        self._check(other)
        q = self.context.q
        return Vector(self.context, tuple((a + b) % q for a, b in zip(self, other)))

    def __sub__(self, other: "Vector") -> "Vector":
        self._check(other)
        q = self.context.q
        return Vector(self.context, tuple((a - b) % q for a, b in zip(self, other)))

    def __neg__(self) -> "Vector":
        q = self.context.q
        return Vector(self.context, tuple((-a) % q for a in self))

    def scale(self, a: int) -> "Vector":
        q = self.context.q
        return Vector(self.context, tuple((a * e) % q for e in self))

    def dot(self, other: "Vector") -> int:
        self._check(other)
        return sum(a * b for a, b in zip(self, other)) % self.context.q

    def support(self) -> frozenset[int]:
        """supp(x) as a set of 1-based coordinates."""
        return frozenset(i + 1 for i, e in enumerate(self.entries) if e)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)

    def __str__(self):
        return "(" + ",".join(map(str, self.entries)) + ")"


@dataclass(frozen=True)
class Matrix:
    """An r x c matrix over F_q, stored row-major."""

    context: FieldContext
    rows: tuple[tuple[int, ...], ...]
    ncols: int

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @cached_property
    def array(self) -> np.ndarray:
        a = np.array(self.rows, dtype=np.int64).reshape(self.nrows, self.ncols)
        a.setflags(write=False)
        return a

    @classmethod
    def from_array(cls, ctx: FieldContext, a: np.ndarray) -> "Matrix":
        a = np.asarray(a, dtype=np.int64) % ctx.q
        return cls(ctx, tuple(tuple(int(e) for e in r) for r in a), a.shape[1])

    def row(self, i: int) -> Vector:
        return Vector(self.context, self.rows[i])

    def row_vectors(self) -> list[Vector]:
        return [Vector(self.context, r) for r in self.rows]

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if other.context != self.context or self.ncols != other.nrows:
                raise ValueError("incompatible matrices")
            return Matrix.from_array(self.context, self.array @ other.array)
        raise TypeError("use Vector-level helpers for vector products")

    def transpose(self) -> "Matrix":
        return Matrix.from_array(self.context, self.array.T)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def __str__(self):
        return "\n".join(" ".join(map(str, r)) for r in self.rows)


def apply(x: Vector, m: Matrix) -> Vector:
    """Row-vector action x -> x·m."""
    if len(x) != m.nrows:
        raise ValueError("length mismatch")
    return Vector(m.context, tuple(int(e) for e in (x.array() @ m.array) % m.context.q))


# -- array-level routines -----------------------------------------------------


def np_rref(a: np.ndarray, q: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``a`` mod q, zero rows dropped."""
    a = np.array(a, dtype=np.int64) % q
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] = (a[r] * pow(int(a[r, c]), q - 2, q)) % q
        col = a[:, c].copy()
        col[r] = 0
        a = (a - np.outer(col, a[r])) % q
        pivots.append(c)
        r += 1
    return a[:r], pivots


def np_rank(a: np.ndarray, q: int) -> int:
    return len(np_rref(a, q)[1])


def np_nullspace(a: np.ndarray, q: int, ncols: int | None = None) -> np.ndarray:
    """Basis (RREF rows) of {u : a·uᵀ = 0}."""
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[1] if ncols is None else ncols
    if a.size == 0:
        return np.eye(n, dtype=np.int64)
    r, pivots = np_rref(a.reshape(-1, n), q)
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, p in enumerate(pivots):
            basis[k, p] = (-r[i, f]) % q
    if len(free) == 0:
        return basis
    return np_rref(basis, q)[0]


def np_invert(a: np.ndarray, q: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    aug = np.concatenate([a % q, np.eye(n, dtype=np.int64)], axis=1)
    r, pivots = np_rref(aug, q)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise Singular("matrix is singular")
    return r[:n, n:]


def np_all_vectors(q: int, n: int, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
    """All q^n vectors as rows, lexicographic order."""
    total = q**n
    if total > cap:
        raise CapExceeded(f"q^n = {total} exceeds enumeration cap {cap}")
    idx = np.arange(total, dtype=np.int64)
    powers = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers[None, :]) % q


def support_masks(vectors: np.ndarray) -> np.ndarray:
    """Bitmask of the support of each row; bit i-1 stands for coordinate i."""
    n = vectors.shape[-1]
    bits = np.left_shift(1, np.arange(n, dtype=np.int64))
    return ((vectors != 0) * bits).sum(axis=-1)


def encode(arrays: np.ndarray, q: int) -> np.ndarray:
    """Injective uint64 key for each trailing-flattened array of residues."""
    width = int(np.prod(arrays.shape[1:]))
    flat = arrays.reshape(arrays.shape[0], width)
    if width * np.log2(q) >= 64:
        raise CapExceeded(f"{width} residues mod {q} do not fit a 64-bit key")
    powers = np.array([q**i for i in range(width)], dtype=np.uint64)
    return (flat.astype(np.uint64) * powers).sum(axis=1, dtype=np.uint64)


def decode(keys: np.ndarray, q: int, shape: tuple[int, ...]) -> np.ndarray:
    width = int(np.prod(shape))
    keys = np.asarray(keys, dtype=np.uint64)
    powers = np.array([q**i for i in range(width)], dtype=np.uint64)
    digits = (keys[:, None] // powers[None, :]) % np.uint64(q)
    return digits.astype(np.int64).reshape((len(keys),) + tuple(shape))


def batch_det_nonzero(mats: np.ndarray, q: int) -> np.ndarray:
    """Invertibility mask for a stack of small square matrices over F_q."""
    out = np.empty(len(mats), dtype=bool)
    n = mats.shape[1]
    if n == 0:
        out[:] = True
        return out
    # Float determinants are exact for these entry ranges when n is small.
    if n <= 6 and (q - 1) ** n * math.factorial(n) < 2**52:
        d = np.rint(np.linalg.det(mats.astype(np.float64))).astype(np.int64)
        return d % q != 0
    for i, m in enumerate(mats):
        out[i] = np_rank(m, q) == n
    return out


# -- Matrix-level API ---------------------------------------------------------


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """RREF of ``m`` with zero rows removed, plus 0-based pivot columns."""
    if m.nrows == 0:
        return m, []
    r, pivots = np_rref(m.array, m.context.q)
    return m.context.matrix(r, m.ncols), pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def nullspace(m: Matrix) -> Matrix:
    """Generator matrix (RREF) of {u : m·uᵀ = 0}."""
    basis = np_nullspace(m.array, m.context.q, m.ncols)
    return m.context.matrix(basis, m.ncols)


def invert(m: Matrix) -> Matrix:
    if not m.is_square():
        raise ValueError("matrix must be square")
    return Matrix.from_array(m.context, np_invert(m.array, m.context.q))


def enumerate_vectors(ctx: FieldContext, n: int, cap: int = DEFAULT_ENUM_CAP) -> Iterator[Vector]:
    """Yield every vector of F_q^n once, in lexicographic order."""
    for row in np_all_vectors(ctx.q, n, cap):
        yield Vector(ctx, tuple(int(e) for e in row))


def in_rowspace(v: Vector, m: Matrix) -> bool:
    if m.nrows == 0:
        return v.is_zero()
    stacked = np.vstack([m.array, v.array()[None, :]])
    return np_rank(stacked, m.context.q) == rank(m)
