"""Linear codes over F_q in canonical (RREF generator) form."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CapExceeded
from .gf import (
    DEFAULT_ENUM_CAP,
    FieldContext,
    Matrix,
    Vector,
    np_all_vectors,
    np_nullspace,
    np_rref,
)

DEFAULT_SUBSPACE_CAP = 10**6


@dataclass(frozen=True)
class LinearCode:
    """Subspace of F_q^n; equality is equality of RREF generators."""

    context: FieldContext
    n: int
    generator: Matrix

    @property
    def k(self) -> int:
        return self.generator.nrows

    @property
    def q(self) -> int:
        return self.context.q

    @property
    def size(self) -> int:
        return self.q**self.k

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(np_rref(self.generator.array, self.q)[1]) if self.k else ()

    def codeword_array(self, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
        """All q^k codewords as rows, in coefficient-lexicographic order."""
        if self.size > cap:
            raise CapExceeded(f"q^k = {self.size} exceeds cap {cap}")
        if self.k == 0:
            return np.zeros((1, self.n), dtype=np.int64)
        coeffs = np_all_vectors(self.q, self.k, cap)
        return (coeffs @ self.generator.array) % self.q

    def codewords(self, cap: int = DEFAULT_ENUM_CAP) -> Iterator[Vector]:
        for row in self.codeword_array(cap):
            yield Vector(self.context, tuple(int(e) for e in row))

    def contains(self, v: Vector) -> bool:
        if self.k == 0:
            return v.is_zero()
        coeff = v.array()[list(self.pivots)]
        return bool(np.array_equal((coeff @ self.generator.array) % self.q, v.array()))

    def basis(self) -> list[Vector]:
        return self.generator.row_vectors()

    def to_json(self) -> dict:
        return {"q": self.q, "n": self.n, "generators": [list(r) for r in self.generator.rows]}

    def __str__(self):
        if self.k == 0:
            return "{0}"
        return "span{" + ", ".join(str(v) for v in self.basis()) + "}"


def from_array(ctx: FieldContext, n: int, rows: np.ndarray) -> LinearCode:
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, n)
    if rows.shape[0] == 0:
        return LinearCode(ctx, n, ctx.matrix((), n))
    r, _ = np_rref(rows, ctx.q)
    return LinearCode(ctx, n, ctx.matrix(r, n))


def from_generators(ctx: FieldContext, n: int, rows: Iterable[Vector | Sequence[int]]) -> LinearCode:
    rows = [list(r) for r in rows]
    if any(len(r) != n for r in rows):
        raise ValueError(f"generators must have length {n}")
    return from_array(ctx, n, np.array(rows, dtype=np.int64).reshape(-1, n))


def span_of_units(ctx: FieldContext, n: int, *index_sets: Iterable[int]) -> LinearCode:
    """span{Σ_{i∈S} e_i : S in index_sets}, with 1-based indices."""
    rows = []
    for s in index_sets:
        row = [0] * n
        for i in s:
            row[i - 1] = 1
        rows.append(row)
    return from_generators(ctx, n, rows)


def dual(c: LinearCode) -> LinearCode:
    if c.k == 0:
        return from_array(c.context, c.n, np.eye(c.n, dtype=np.int64))
    basis = np_nullspace(c.generator.array, c.q, c.n)
    return from_array(c.context, c.n, basis)


def load_code(path: str | Path) -> LinearCode:
    return code_from_json(json.loads(Path(path).read_text()))


def code_from_json(data: dict) -> LinearCode:
    try:
        ctx = FieldContext(int(data["q"]))
        n = int(data["n"])
        gens = data.get("generators", [])
    except (KeyError, TypeError) as exc:
        raise ValueError('code JSON needs keys "q", "n", "generators"') from exc
    return from_generators(ctx, n, gens)


def count_rref_profiles(q: int, n: int, max_dim: int | None = None) -> int:
    """Number of subspaces of F_q^n with dim <= max_dim, counted by pivot profile."""
    max_dim = n if max_dim is None else max_dim
    total = 0
    for k in range(min(max_dim, n) + 1):
        for piv in itertools.combinations(range(n), k):
            free = sum(1 for r, p in enumerate(piv) for c in range(p + 1, n) if c not in piv)
            total += q**free
    return total


def all_subspaces(
    ctx: FieldContext,
    n: int,
    max_dim: int | None = None,
    cap: int = DEFAULT_SUBSPACE_CAP,
    dims: Iterable[int] | None = None,
) -> Iterator[LinearCode]:
    """Every subspace of F_q^n of dimension <= max_dim, each once.

    Subspaces are generated by RREF pivot profile with all assignments of the
    free entries; ordering is by dimension, then pivot profile.
    """
    max_dim = n if max_dim is None else min(max_dim, n)
    total = count_rref_profiles(ctx.q, n, max_dim)
    if total > cap:
        raise CapExceeded(f"{total} subspaces exceed cap {cap}")
    q = ctx.q
    wanted = range(max_dim + 1) if dims is None else [d for d in dims if d <= max_dim]
    seen = set()
    for k in wanted:
        for piv in itertools.combinations(range(n), k):
            cells = [(r, c) for r, p in enumerate(piv) for c in range(p + 1, n) if c not in piv]
            base = np.zeros((k, n), dtype=np.int64)
            for r, p in enumerate(piv):
                base[r, p] = 1
            for values in itertools.product(range(q), repeat=len(cells)):
                g = base.copy()
                for (r, c), v in zip(cells, values):
                    g[r, c] = v
                code = LinearCode(ctx, n, ctx.matrix(g, n))
                key = code.generator.rows
                if key in seen:
                    raise AssertionError("duplicate canonical generator")
                seen.add(key)
                yield code
