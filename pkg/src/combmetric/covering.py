"""Coverings of [n] and the combinatorial structure derived from them.

Coordinates are 1-based throughout, matching the covering file format.

Domination follows the incidence-row order: class ``H_i`` dominates ``H_j``
when every basic set containing ``H_j`` also contains ``H_i``. The *heads* of
a family of classes are the classes that dominate no other class of the
family, i.e. the classes lying in the fewest basic sets. Those are the
coordinates a linear isometry cannot clear, so the minimum set header and the
cleared-out form keep them.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptySet, NotACovering
from .gf import Vector


def _mask(s: Iterable[int]) -> int:
    m = 0
    for i in s:
        m |= 1 << (i - 1)
    return m


@dataclass(frozen=True)
class Covering:
    """A normalized covering of [n]: distinct, nonempty, non-redundant sets."""

    n: int
    sets: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        sets = tuple(tuple(sorted(int(i) for i in s)) for s in self.sets)
        object.__setattr__(self, "sets", sets)
        if self.n < 1:
            raise ValueError("n must be positive")
        for s in sets:
            if not s:
                raise EmptySet("basic sets must be nonempty")
            if s[0] < 1 or s[-1] > self.n:
                raise ValueError(f"set {list(s)} not inside [1, {self.n}]")
        union = 0
        for m in self.masks:
            union |= m
        if union != (1 << self.n) - 1:
            missing = [i for i in range(1, self.n + 1) if not union >> (i - 1) & 1]
            raise NotACovering(f"coordinates {missing} are not covered")
        if len(set(self.masks)) != len(sets):
            raise ValueError("duplicate basic sets; use normalize()")
        for a in self.masks:
            for b in self.masks:
                if a != b and a & b == a:
                    raise ValueError("redundant basic set present; use normalize()")

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(_mask(s) for s in self.sets)

    @property
    def r(self) -> int:
        return len(self.sets)

    def set_sizes(self) -> list[int]:
        return [len(s) for s in self.sets]

    def is_hamming(self) -> bool:
        return all(len(s) == 1 for s in self.sets)

    def is_partition(self) -> bool:
        return sum(len(s) for s in self.sets) == self.n

    def canonical(self) -> tuple[tuple[int, ...], ...]:
        """Order-independent identity of the covering."""
        return tuple(sorted(self.sets))

    def to_json(self) -> dict:
        return {"n": self.n, "sets": [list(s) for s in self.sets]}

    def __str__(self):
        return "{" + ", ".join("{" + ",".join(map(str, s)) + "}" for s in self.sets) + "}"

    @cached_property
    def structure(self) -> "ClassStructure":
        return class_structure(self)


@dataclass(frozen=True)
class NormalizeResult:
    covering: Covering
    dropped: tuple[tuple[int, ...], ...] = field(default=())


def normalize_with_report(n: int, sets: Iterable[Iterable[int]]) -> NormalizeResult:
    """Drop duplicate and redundant sets, reporting what was removed."""
    raw = [tuple(sorted(set(int(i) for i in s))) for s in sets]
    for s in raw:
        if not s:
            raise EmptySet("basic sets must be nonempty")
        if s[0] < 1 or s[-1] > n:
            raise ValueError(f"set {list(s)} not inside [1, {n}]")
    union = set().union(*raw) if raw else set()
    if union != set(range(1, n + 1)):
        missing = sorted(set(range(1, n + 1)) - union)
        raise NotACovering(f"coordinates {missing} are not covered")
    kept: list[tuple[int, ...]] = []
    dropped: list[tuple[int, ...]] = []
    seen = set()
    for s in raw:
        if s in seen:
            dropped.append(s)
            continue
        seen.add(s)
        if any(set(s) < set(t) for t in raw):
            dropped.append(s)
        else:
            kept.append(s)
    return NormalizeResult(Covering(n, tuple(kept)), tuple(dropped))


def normalize(n: int, sets: Iterable[Iterable[int]]) -> Covering:
    return normalize_with_report(n, sets).covering


def load_covering(path: str | Path) -> NormalizeResult:
    data = json.loads(Path(path).read_text())
    return covering_from_json(data)


def covering_from_json(data: dict) -> NormalizeResult:
    try:
        n = int(data["n"])
        sets = data["sets"]
    except (KeyError, TypeError) as exc:
        raise ValueError('covering JSON needs keys "n" and "sets"') from exc
    return normalize_with_report(n, sets)


# -- named families -----------------------------------------------------------


def hamming(n: int) -> Covering:
    return Covering(n, tuple((i,) for i in range(1, n + 1)))


def burst(n: int, b: int) -> Covering:
    """The b-burst covering {[b], [b]+1, ..., [b]+(n-b)}."""
    if not 1 <= b <= n:
        raise ValueError("need 1 <= b <= n")
    return Covering(n, tuple(tuple(range(1 + i, b + i + 1)) for i in range(n - b + 1)))


def block(sizes: Sequence[int]) -> Covering:
    sets, start = [], 1
    for s in sizes:
        sets.append(tuple(range(start, start + s)))
        start += s
    return Covering(start - 1, tuple(sets))


def whole(n: int) -> Covering:
    return Covering(n, (tuple(range(1, n + 1)),))


def all_coverings(n: int) -> list[Covering]:
    """Every normalized covering of [n] (antichains of nonempty sets covering [n])."""
    subsets = list(range(1, 1 << n))
    full = (1 << n) - 1
    out: list[Covering] = []

    def extend(start: int, chosen: list[int], union: int):
        if union == full:
            out.append(
                Covering(n, tuple(tuple(i + 1 for i in range(n) if m >> i & 1) for m in chosen))
            )
        for k in range(start, len(subsets)):
            m = subsets[k]
            if any(m & c == m or m & c == c for c in chosen):
                continue
            chosen.append(m)
            extend(k + 1, chosen, union | m)
            chosen.pop()

    extend(0, [], 0)
    return out


# -- derived structure --------------------------------------------------------


def is_k_partition(f: Covering) -> int | None:
    """Common block size k if f partitions [n] into equal blocks, else None."""
    sizes = set(f.set_sizes())
    if f.is_partition() and len(sizes) == 1:
        return sizes.pop()
    return None


def components(f: Covering) -> list[Covering]:
    """Connected components of the intersection graph of the basic sets.

    Each component is returned as a covering of its own ground set, with the
    original coordinates kept (so ``n`` is the largest coordinate, and the
    fragment is not re-validated as a covering of [n]).
    """
    return [_Fragment(f.n, tuple(f.sets[i] for i in group)) for group in component_indices(f)]


def component_indices(f: Covering) -> list[list[int]]:
    masks = f.masks
    seen = [False] * f.r
    groups = []
    for start in range(f.r):
        if seen[start]:
            continue
        seen[start] = True
        group, queue = [], deque([start])
        while queue:
            a = queue.popleft()
            group.append(a)
            for b in range(f.r):
                if not seen[b] and masks[a] & masks[b]:
                    seen[b] = True
                    queue.append(b)
        groups.append(sorted(group))
    return groups


@dataclass(frozen=True)
class _Fragment:
    """A group of basic sets from a larger covering."""

    n: int
    sets: tuple[tuple[int, ...], ...]

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i for s in self.sets for i in s)

    def __len__(self):
        return len(self.sets)


@dataclass(frozen=True)
class ClassStructure:
    """Equivalence classes of ~_F, the incidence matrix M and domination."""

    classes: tuple[tuple[int, ...], ...]
    incidence: tuple[tuple[int, ...], ...]
    class_of: tuple[int, ...]  # coordinate i -> class index, at position i-1
    memberships: tuple[frozenset[int], ...]

    @property
    def s(self) -> int:
        return len(self.classes)

    def dominates(self, i: int, j: int) -> bool:
        """Whether class i dominates class j: supp(row j) ⊆ supp(row i)."""
        return self.memberships[j] <= self.memberships[i]

    @cached_property
    def domination_pairs(self) -> tuple[tuple[int, int], ...]:
        """Strict pairs (j, i) with H_j < H_i."""
        return tuple(
            (j, i)
            for i in range(self.s)
            for j in range(self.s)
            if i != j and self.dominates(i, j)
        )

    def heads(self, family: Iterable[int]) -> list[int]:
        """Classes of ``family`` that dominate no other class of ``family``."""
        family = sorted(set(family))
        return [
            i for i in family
            if not any(j != i and self.dominates(i, j) for j in family)
        ]

    def incidence_array(self) -> np.ndarray:
        return np.array(self.incidence, dtype=np.int64)


def class_structure(f: Covering) -> ClassStructure:
    membership_of = [
        frozenset(k for k, s in enumerate(f.masks) if s >> (i - 1) & 1)
        for i in range(1, f.n + 1)
    ]
    order: dict[frozenset[int], list[int]] = {}
    for i, mem in enumerate(membership_of, start=1):
        order.setdefault(mem, []).append(i)
    classes = sorted((tuple(v) for v in order.values()), key=lambda c: c[0])
    memberships = tuple(membership_of[c[0] - 1] for c in classes)
    class_of = [0] * f.n
    for idx, c in enumerate(classes):
        for i in c:
            class_of[i - 1] = idx
    incidence = tuple(tuple(int(k in mem) for k in range(f.r)) for mem in memberships)
    # distinct classes have distinct incidence rows by construction
    assert len(set(memberships)) == len(memberships)
    return ClassStructure(tuple(classes), incidence, tuple(class_of), memberships)


def msh(f: Covering, support: Iterable[int]) -> frozenset[int]:
    """Minimum set header of a coordinate set X."""
    support = frozenset(support)
    if not support:
        return frozenset()
    cs = f.structure
    family = {cs.class_of[i - 1] for i in support}
    keep = set(cs.heads(family))
    return frozenset(i for i in support if cs.class_of[i - 1] in keep)


def cleared_out(f: Covering, x: Vector) -> Vector:
    """x restricted to the minimum set header of its support."""
    if len(x) != f.n:
        raise ValueError("vector length must equal n")
    header = msh(f, x.support())
    return Vector(x.context, tuple(e if i + 1 in header else 0 for i, e in enumerate(x.entries)))
