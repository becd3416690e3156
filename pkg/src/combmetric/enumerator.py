"""F-weight enumerators and MacWilliams-type identity verdicts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .code import LinearCode, all_subspaces, dual, span_of_units
from .covering import Covering, is_k_partition
from .errors import IsKPartition
from .gf import DEFAULT_ENUM_CAP, FieldContext
from .metric import max_weight, weights_of


@dataclass(frozen=True)
class WeightDistribution:
    """Coefficients A_0..A_D of W_C(x, y), padded to the ambient max weight D."""

    degree: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.degree + 1:
            raise ValueError("need degree + 1 coefficients")

    @property
    def total(self) -> int:
        return sum(self.coeffs)

    def polynomial(self) -> str:
        """Human-readable W(x, y) = Σ A_i x^(D-i) y^i."""
        terms = []
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            mono = _power("x", self.degree - i) + _power("y", i)
            if not mono:
                terms.append(str(a))
            else:
                terms.append(mono if a == 1 else f"{a}{mono}")
        return " + ".join(terms) if terms else "0"

    def __str__(self):
        return "(" + ", ".join(map(str, self.coeffs)) + ")"


def _power(var: str, e: int) -> str:
    if e == 0:
        return ""
    return var if e == 1 else f"{var}^{e}"


def enumerate_weights(f: Covering, c: LinearCode, cap: int = DEFAULT_ENUM_CAP) -> WeightDistribution:
    if c.n != f.n:
        raise ValueError("code length differs from covering size")
    degree = max_weight(f)
    w = weights_of(f, c.codeword_array(cap))
    counts = np.bincount(w, minlength=degree + 1)
    return WeightDistribution(degree, tuple(int(a) for a in counts))


@dataclass(frozen=True)
class IdentityWitness:
    """Two codes with equal distributions whose duals' distributions differ."""

    code1: LinearCode
    code2: LinearCode
    dist1: WeightDistribution
    dist2: WeightDistribution
    dual_dist1: WeightDistribution
    dual_dist2: WeightDistribution

    def is_valid(self) -> bool:
        return self.dist1 == self.dist2 and self.dual_dist1 != self.dual_dist2

    def to_json(self) -> dict:
        return {
            "code1": self.code1.to_json(),
            "code2": self.code2.to_json(),
            "distribution": list(self.dist1.coeffs),
            "dual_distribution1": list(self.dual_dist1.coeffs),
            "dual_distribution2": list(self.dual_dist2.coeffs),
        }


@dataclass(frozen=True)
class IdentityVerdict:
    admits: bool
    k: int | None = None
    witness: IdentityWitness | None = None

    def __post_init__(self):
        if self.admits != (self.witness is None):
            raise ValueError("admits must be true exactly when there is no witness")

    def to_json(self) -> dict:
        out = {"admits": self.admits, "k": self.k}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def make_witness(f: Covering, c1: LinearCode, c2: LinearCode) -> IdentityWitness:
    return IdentityWitness(
        c1,
        c2,
        enumerate_weights(f, c1),
        enumerate_weights(f, c2),
        enumerate_weights(f, dual(c1)),
        enumerate_weights(f, dual(c2)),
    )


def overlap_pairs(f: Covering) -> Iterable[tuple[int, int]]:
    """(i_0, i_1) with i_1 ∈ A∩B and i_0 ∈ A\\B for overlapping A ≠ B."""
    for a in f.sets:
        for b in f.sets:
            if a == b:
                continue
            common = sorted(set(a) & set(b))
            if not common:
                continue
            for i0 in sorted(set(a) - set(b)):
                for i1 in common:
                    yield i0, i1


def construct_counterexample(
    f: Covering, ctx: FieldContext, max_dim: int | None = None
) -> IdentityWitness:
    """Two codes refuting a MacWilliams-type identity for a non-k-partition.

    Overlapping sets give the pair span{e_i0}, span{e_i0 + e_i1}. Partitions
    with unequal block sizes have no overlap; those fall back to a scan over
    all subspaces.
    """
    if is_k_partition(f) is not None:
        raise IsKPartition(f"{f} is a k-partition; its metric admits the identity")
    for i0, i1 in overlap_pairs(f):
        c1 = span_of_units(ctx, f.n, [i0])
        c2 = span_of_units(ctx, f.n, [i0, i1])
        w = make_witness(f, c1, c2)
        if w.is_valid():
            return w
    verdict = identity_verdict_exhaustive(f, ctx, max_dim)
    if verdict.witness is None:
        raise AssertionError(f"no counterexample found for {f} up to dim {max_dim}")
    return verdict.witness


def identity_verdict_structural(f: Covering, ctx: FieldContext) -> IdentityVerdict:
    k = is_k_partition(f)
    if k is not None:
        return IdentityVerdict(True, k)
    return IdentityVerdict(False, None, construct_counterexample(f, ctx))


def identity_verdict_exhaustive(
    f: Covering, ctx: FieldContext, max_dim: int | None = None
) -> IdentityVerdict:
    """Scan all subspaces of dim <= max_dim for a violating pair."""
    groups: dict[tuple[int, ...], tuple[LinearCode, WeightDistribution]] = {}
    for c in all_subspaces(ctx, f.n, max_dim):
        dist = enumerate_weights(f, c).coeffs
        dual_dist = enumerate_weights(f, dual(c))
        if dist not in groups:
            groups[dist] = (c, dual_dist)
            continue
        first, first_dual = groups[dist]
        if first_dual != dual_dist:
            return IdentityVerdict(False, None, make_witness(f, first, c))
    return IdentityVerdict(True, is_k_partition(f))
