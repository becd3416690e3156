"""The F-combinatorial weight and distance.

``weight`` solves a minimum set cover exactly. Because the weight depends only
on the support, bulk computations go through :func:`weight_table`, which holds
one entry per support bitmask.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .covering import Covering
from .errors import CapExceeded
from .gf import FieldContext, Vector, support_masks

TABLE_MAX_N = 20


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _covers_within(uncovered: int, sets: list[int], depth: int, widest: int) -> bool:
    if not uncovered:
        return True
    if depth == 0 or _popcount(uncovered) > depth * widest:
        return False
    low = uncovered & -uncovered
    for s in sets:
        if s & low and _covers_within(uncovered & ~s, sets, depth - 1, widest):
            return True
    return False


def min_cover_size(target: int, masks: tuple[int, ...]) -> int:
    """Fewest masks whose union contains ``target`` (iterative deepening)."""
    if not target:
        return 0
    relevant = sorted({m & target for m in masks if m & target}, key=_popcount, reverse=True)
    # sets whose trace on the target is inside another trace are never needed
    relevant = [a for a in relevant if not any(a != b and a & b == a for b in relevant)]
    widest = _popcount(relevant[0])
    for depth in range(1, len(relevant) + 1):
        if _covers_within(target, relevant, depth, widest):
            return depth
    raise ValueError("target is not covered by the family")


def support_weight(f: Covering, support: int) -> int:
    return min_cover_size(support, f.masks)


def weight(f: Covering, x: Vector) -> int:
    if len(x) != f.n:
        raise ValueError(f"vector length {len(x)} != n = {f.n}")
    return support_weight(f, _mask_of(x))


def distance(f: Covering, x: Vector, y: Vector) -> int:
    return weight(f, x - y)


def max_weight(f: Covering, ctx: FieldContext | None = None) -> int:
    """Largest weight in F_q^n; attained by any full-support vector."""
    return support_weight(f, (1 << f.n) - 1)


@lru_cache(maxsize=512)
def weight_table(f: Covering) -> np.ndarray:
    """Weight of every support, indexed by bitmask (bit i-1 = coordinate i)."""
    if f.n > TABLE_MAX_N:
        raise CapExceeded(f"n = {f.n} too large for a support table")
    table = np.empty(1 << f.n, dtype=np.int64)
    for m in range(1 << f.n):
        table[m] = min_cover_size(m, f.masks)
    table.setflags(write=False)
    return table


def weights_of(f: Covering, vectors: np.ndarray) -> np.ndarray:
    """Vectorized weights of the rows (or trailing axis) of ``vectors``."""
    return weight_table(f)[support_masks(vectors)]


def _mask_of(x: Vector) -> int:
    m = 0
    for i, e in enumerate(x.entries):
        if e:
            m |= 1 << i
    return m


def check_axioms(f: Covering, q: int, triple_samples: int | None = None, seed: int = 0) -> dict:
    """Count metric-axiom violations over F_q^n.

    Pairs are exhaustive. Triples are exhaustive unless ``triple_samples`` is
    given, in which case that many seeded random triples are drawn.
    """
    from .gf import np_all_vectors

    vecs = np_all_vectors(q, f.n)
    table = weight_table(f)
    diff = (vecs[:, None, :] - vecs[None, :, :]) % q
    d = table[support_masks(diff)]
    eq = (vecs[:, None, :] == vecs[None, :, :]).all(axis=2)
    out = {
        "pairs": int(d.size),
        "symmetry_violations": int((d != d.T).sum()),
        "identity_violations": int(((d == 0) != eq).sum()),
    }
    m = len(vecs)
    if triple_samples is None:
        # axes [x, y, z]: d(x,z) > d(x,y) + d(y,z)
        out["triples"] = m**3
        out["triangle_violations"] = int((d[:, None, :] > d[:, :, None] + d[None, :, :]).sum())
    else:
        rng = np.random.default_rng(seed)
        x, y, z = rng.integers(0, m, size=(3, triple_samples))
        out["triples"] = int(triple_samples)
        out["triangle_violations"] = int((d[x, z] > d[x, y] + d[y, z]).sum())
    return out
