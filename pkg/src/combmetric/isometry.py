"""Linear isometries of (F_q^n, d_F).

Matrices act on row vectors: T(x) = x·T, so T(e_i) is row i of T. Under this
convention a matrix respects the incidence matrix M when each diagonal class
block is invertible and an off-diagonal block B_ij (rows in H_i, columns in
H_j) is nonzero only if H_j dominates H_i. Mass can then only move from a
coordinate to coordinates lying in at least the same basic sets.

Groups are held as sorted arrays of uint64 keys (base-q digits of the
entries); see :class:`MatrixGroup`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .covering import Covering, cleared_out
from .errors import CapExceeded, NotDecomposable
from .gf import (
    DEFAULT_ENUM_CAP,
    FieldContext,
    Matrix,
    Vector,
    apply,
    batch_det_nonzero,
    decode,
    encode,
    np_all_vectors,
    np_invert,
    support_masks,
)
from .metric import weight_table

PERMUTATION_CAP_N = 8
DEFAULT_GROUP_CAP = 10**6
BRUTE_FORCE_CAP = 2**20
CHUNK = 1 << 15
# elements x vectors budget for certifying every element individually
CERTIFY_WORK_CAP = 2 * 10**7


@dataclass(frozen=True)
class Isometry:
    matrix: Matrix
    certified: bool = False

    def __call__(self, x: Vector) -> Vector:
        return apply(x, self.matrix)


@dataclass(frozen=True)
class PermutationPart:
    """phi as a tuple: phi[i-1] = φ(i)."""

    phi: tuple[int, ...]

    def matrix(self, ctx: FieldContext) -> Matrix:
        return Matrix.from_array(ctx, permutation_array(self.phi))

    def is_identity(self) -> bool:
        return all(p == i for i, p in enumerate(self.phi, start=1))

    def __str__(self):
        cycles, seen = [], set()
        for start in range(1, len(self.phi) + 1):
            if start in seen or self.phi[start - 1] == start:
                continue
            cyc, i = [], start
            while i not in seen:
                seen.add(i)
                cyc.append(i)
                i = self.phi[i - 1]
            cycles.append("(" + " ".join(map(str, cyc)) + ")")
        return "".join(cycles) or "()"


class MatrixGroup:
    """A finite set of n x n matrices over F_q, stored by key."""

    def __init__(self, ctx: FieldContext, n: int, keys: np.ndarray, certified: str | None = None):
        self.context = ctx
        self.n = n
        self.keys = np.unique(np.asarray(keys, dtype=np.uint64))
        # how membership in GL(n,F)_q was established, if at all
        self.certified = certified

    @classmethod
    def from_arrays(cls, ctx: FieldContext, mats: np.ndarray, certified: str | None = None):
        n = mats.shape[1] if mats.ndim == 3 else 0
        return cls(ctx, n, encode(mats, ctx.q), certified)

    def __len__(self) -> int:
        return len(self.keys)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixGroup):
            return NotImplemented
        return self.context == other.context and np.array_equal(self.keys, other.keys)

    def __hash__(self):
        return hash((self.context, self.n, self.keys.tobytes()))

    def contains_array(self, m: np.ndarray) -> bool:
        k = encode(np.asarray(m)[None], self.context.q)[0]
        i = np.searchsorted(self.keys, k)
        return bool(i < len(self.keys) and self.keys[i] == k)

    def __contains__(self, m) -> bool:
        if isinstance(m, Isometry):
            m = m.matrix
        return self.contains_array(m.array)

    def arrays(self, chunk: int = CHUNK) -> Iterator[np.ndarray]:
        for start in range(0, len(self.keys), chunk):
            yield decode(self.keys[start:start + chunk], self.context.q, (self.n, self.n))

    def matrices(self) -> np.ndarray:
        return decode(self.keys, self.context.q, (self.n, self.n))

    def __iter__(self) -> Iterator[Isometry]:
        for block in self.arrays():
            for m in block:
                yield Isometry(Matrix.from_array(self.context, m), self.certified is not None)

    def is_closed(self) -> bool:
        """Closure under products (so a group, being finite)."""
        if len(self) == 0:
            return False
        q = self.context.q
        mats = self.matrices()
        for g in mats:
            for block in self.arrays():
                prods = np.einsum("aij,jk->aik", block, g) % q
                keys = encode(prods, q)
                if not np.isin(keys, self.keys).all():
                    return False
        return True


# -- permutations -------------------------------------------------------------


def permutation_array(phi: Sequence[int]) -> np.ndarray:
    """T_φ with (x·T_φ)_j = x_{φ(j)}."""
    n = len(phi)
    p = np.zeros((n, n), dtype=np.int64)
    for j, pj in enumerate(phi):
        p[pj - 1, j] = 1
    return p


def preserves_covering(f: Covering, phi: Sequence[int]) -> bool:
    if sorted(phi) != list(range(1, f.n + 1)):
        raise ValueError("phi must be a permutation of [n]")
    basic = set(f.masks)
    for s in f.sets:
        img = 0
        for i in s:
            img |= 1 << (phi[i - 1] - 1)
        if img not in basic:
            return False
    return True


def preserving_permutations(f: Covering) -> list[PermutationPart]:
    if f.n > PERMUTATION_CAP_N:
        raise CapExceeded(f"n = {f.n} exceeds permutation cap {PERMUTATION_CAP_N}")
    return [
        PermutationPart(phi)
        for phi in itertools.permutations(range(1, f.n + 1))
        if preserves_covering(f, phi)
    ]


def group_G(f: Covering, ctx: FieldContext) -> MatrixGroup:
    perms = preserving_permutations(f)
    mats = np.stack([permutation_array(p.phi) for p in perms])
    return MatrixGroup.from_arrays(ctx, mats, certified="permutation")


# -- K_M ----------------------------------------------------------------------


def _allowed_cells(f: Covering) -> np.ndarray:
    """Boolean n x n mask of entries a matrix respecting M may use."""
    cs = f.structure
    allowed = np.zeros((f.n, f.n), dtype=bool)
    for x in range(f.n):
        for y in range(f.n):
            i, j = cs.class_of[x], cs.class_of[y]
            allowed[x, y] = i == j or cs.dominates(j, i)
    return allowed


def respects_M(f: Covering, b: Matrix | np.ndarray, q: int | None = None) -> bool:
    arr = b.array if isinstance(b, Matrix) else np.asarray(b)
    q = b.context.q if isinstance(b, Matrix) else q
    if arr.shape != (f.n, f.n):
        raise ValueError("matrix must be n x n")
    if np.any(arr[~_allowed_cells(f)] % q):
        return False
    for cls in f.structure.classes:
        idx = [i - 1 for i in cls]
        blk = arr[np.ix_(idx, idx)][None]
        if not batch_det_nonzero(blk % q, q)[0]:
            return False
    return True


def _invertible_blocks(q: int, h: int, cap: int) -> np.ndarray:
    if q ** (h * h) > cap:
        raise CapExceeded(f"enumerating {h}x{h} blocks over F_{q} exceeds cap")
    allm = np_all_vectors(q, h * h, cap).reshape(-1, h, h)
    return allm[batch_det_nonzero(allm, q)]


def gl_order(q: int, h: int) -> int:
    return math.prod(q**h - q**i for i in range(h))


def k_m_order(f: Covering, q: int) -> int:
    cs = f.structure
    diag = math.prod(gl_order(q, len(c)) for c in cs.classes)
    off = int(_allowed_cells(f).sum()) - sum(len(c) ** 2 for c in cs.classes)
    return diag * q**off


def group_K_M(f: Covering, ctx: FieldContext, cap: int = DEFAULT_GROUP_CAP) -> MatrixGroup:
    """All matrices respecting M, built as a cartesian product of blocks."""
    q, n = ctx.q, f.n
    order = k_m_order(f, q)
    if order > cap:
        raise CapExceeded(f"|K_M| = {order} exceeds cap {cap}")
    arr = np.zeros((1, n, n), dtype=np.int64)
    for cls in f.structure.classes:
        idx = np.array(cls) - 1
        blocks = _invertible_blocks(q, len(cls), cap)
        m = len(blocks)
        arr = np.repeat(arr, m, axis=0)
        arr[:, idx[:, None], idx[None, :]] = np.tile(blocks, (len(arr) // m, 1, 1))
    allowed = _allowed_cells(f)
    same = np.zeros_like(allowed)
    for cls in f.structure.classes:
        idx = np.array(cls) - 1
        same[np.ix_(idx, idx)] = True
    for x, y in zip(*np.nonzero(allowed & ~same)):
        arr = np.repeat(arr, q, axis=0)
        arr[:, x, y] = np.tile(np.arange(q), len(arr) // q)
    group = MatrixGroup.from_arrays(ctx, arr)
    assert len(group) == order
    work = len(group) * q**n
    if work <= CERTIFY_WORK_CAP:
        certify_group(f, group)
    else:
        gens = _k_m_generators(f, q, cap)
        regenerated, _ = closure(ctx, n, [gens], cap)
        if regenerated != group:
            raise AssertionError("elementary generators do not regenerate K_M")
        certify_group(f, group, gens, generated=True)
    return group


def _k_m_generators(f: Covering, q: int, cap: int) -> np.ndarray:
    """Invertible diagonal blocks one class at a time, plus elementary cells."""
    n = f.n
    gens = []
    for cls in f.structure.classes:
        idx = np.array(cls) - 1
        for blk in _invertible_blocks(q, len(cls), cap):
            g = np.eye(n, dtype=np.int64)
            g[np.ix_(idx, idx)] = blk
            gens.append(g)
    allowed = _allowed_cells(f)
    for cls in f.structure.classes:
        idx = np.array(cls) - 1
        allowed[np.ix_(idx, idx)] = False
    for x, y in zip(*np.nonzero(allowed)):
        g = np.eye(n, dtype=np.int64)
        g[x, y] = 1
        gens.append(g)
    return np.stack(gens)


# -- certification -------------------------------------------------------------


def preserves_weight(f: Covering, mats: np.ndarray, q: int, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
    """Mask of the matrices with wt(x·T) = wt(x) for every x in F_q^n."""
    table = weight_table(f)
    vecs = np_all_vectors(q, f.n, cap)
    base = table[support_masks(vecs)]
    out = np.empty(len(mats), dtype=bool)
    step = max(1, (1 << 22) // max(1, len(vecs) * f.n))
    for start in range(0, len(mats), step):
        block = mats[start:start + step]
        imgs = np.einsum("vi,aij->avj", vecs, block) % q
        out[start:start + step] = (table[support_masks(imgs)] == base[None, :]).all(axis=1)
    return out


def certify_group(
    f: Covering,
    group: MatrixGroup,
    generators: np.ndarray | None = None,
    generated: bool = False,
) -> None:
    """Verify weight preservation, element-wise when affordable.

    Above the work cap, and only when ``group`` is known to be generated by
    ``generators``, just the generators are checked; that suffices for the
    whole group. Raises AssertionError on any failure.
    """
    q = group.context.q
    work = len(group) * q**f.n
    if work <= CERTIFY_WORK_CAP or generators is None or not generated:
        for block in group.arrays():
            if not preserves_weight(f, block, q).all():
                raise AssertionError("group contains a non-isometry")
        group.certified = "all-elements"
    else:
        if not preserves_weight(f, generators, q).all():
            raise AssertionError("a generator is not an isometry")
        group.certified = "generators"


def certify(f: Covering, m: Matrix) -> Isometry:
    """Isometry with its certification flag set by an exhaustive check."""
    ok = bool(preserves_weight(f, m.array[None], m.context.q)[0])
    return Isometry(m, ok)


# -- closure --------------------------------------------------------------------


def closure(
    ctx: FieldContext, n: int, generators: Iterable[np.ndarray], cap: int = DEFAULT_GROUP_CAP
) -> tuple[MatrixGroup, np.ndarray]:
    """Group generated by ``generators`` by breadth-first product closure.

    Generators already in the current group are skipped, so only a short
    list of essential generators drives the search. Returns the group and the
    essential generators.
    """
    q = ctx.q
    ident = np.eye(n, dtype=np.int64)
    visited = {int(encode(ident[None], q)[0])}
    essential: list[np.ndarray] = []
    for block in generators:
        block = np.asarray(block, dtype=np.int64).reshape(-1, n, n)
        for g, gk in zip(block, encode(block, q).tolist()):
            if gk in visited:
                continue
            essential.append(g)
            current = np.fromiter(visited, dtype=np.uint64, count=len(visited))
            frontier = _fresh(
                (decode(current[i:i + CHUNK], q, (n, n)) @ g % q for i in range(0, len(current), CHUNK)),
                visited, q,
            )
            while len(frontier):
                visited.update(frontier.tolist())
                if len(visited) > cap:
                    raise CapExceeded(f"group closure exceeds cap {cap}")
                new_parts = []
                for i in range(0, len(frontier), CHUNK):
                    mats = decode(frontier[i:i + CHUNK], q, (n, n))
                    new_parts.extend(mats @ s % q for s in essential)
                frontier = _fresh(new_parts, visited, q)
    keys = np.fromiter(visited, dtype=np.uint64, count=len(visited))
    gens = np.stack(essential) if essential else np.zeros((0, n, n), dtype=np.int64)
    return MatrixGroup(ctx, n, keys), gens


def _fresh(parts, visited: set, q: int) -> np.ndarray:
    keys = [encode(p, q) for p in parts]
    if not keys:
        return np.zeros(0, dtype=np.uint64)
    keys = np.unique(np.concatenate(keys))
    keep = np.fromiter((k not in visited for k in keys.tolist()), dtype=bool, count=len(keys))
    return keys[keep]


def full_isometry_group(f: Covering, ctx: FieldContext, cap: int = DEFAULT_GROUP_CAP) -> MatrixGroup:
    """Subgroup generated by G and K_M."""
    g = group_G(f, ctx)
    km = group_K_M(f, ctx, cap)
    group, essential = closure(ctx, f.n, [g.matrices(), *km.arrays()], cap)
    certify_group(f, group, essential, generated=True)
    return group


def brute_force_isometries(f: Covering, ctx: FieldContext, cap: int = BRUTE_FORCE_CAP) -> MatrixGroup:
    """Every n x n matrix over F_q that preserves the F-weight."""
    q, n = ctx.q, f.n
    total = q ** (n * n)
    if total > cap:
        raise CapExceeded(f"q^(n^2) = {total} exceeds brute-force cap {cap}")
    found = []
    for start in range(0, total, CHUNK):
        idx = np.arange(start, min(total, start + CHUNK), dtype=np.uint64)
        mats = decode(idx, q, (n, n))
        mats = mats[batch_det_nonzero(mats, q)]
        if len(mats):
            found.append(encode(mats[preserves_weight(f, mats, q)], q))
    keys = np.concatenate(found) if found else np.zeros(0, dtype=np.uint64)
    return MatrixGroup(ctx, n, keys, certified="all-elements")


# -- decomposition -------------------------------------------------------------


def decompose(
    f: Covering, t: Isometry | Matrix, perms: Sequence[PermutationPart] | None = None
) -> tuple[PermutationPart, Matrix]:
    """Write T = T_φ·B with φ preserving F and B respecting M."""
    m = t.matrix if isinstance(t, Isometry) else t
    q = m.context.q
    perms = preserving_permutations(f) if perms is None else perms
    for p in perms:
        # T_φ is orthogonal: its inverse is its transpose
        b = permutation_array(p.phi).T @ m.array % q
        if respects_M(f, b, q):
            return p, Matrix.from_array(m.context, b)
    raise NotDecomposable(f"no φ in G gives T_φ^-1·T respecting M:\n{m}")


def inverse(m: Matrix) -> Matrix:
    return Matrix.from_array(m.context, np_invert(m.array, m.context.q))


def cleared_image_classes(f: Covering, t: Matrix) -> list[frozenset[int]]:
    """For each i, the classes met by supp(cleared_out(T(e_i)))."""
    cs = f.structure
    out = []
    for i in range(1, f.n + 1):
        img = cleared_out(f, t.row(i - 1))
        out.append(frozenset(cs.class_of[j - 1] for j in img.support()))
    return out
