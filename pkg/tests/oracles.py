"""Independent brute-force oracles. Nothing here imports the package."""

from __future__ import annotations

import itertools


def all_vectors(q, n):
    return [tuple(v) for v in itertools.product(range(q), repeat=n)]


def naive_weight(sets, x):
    """Minimum number of sets covering supp(x), by trying every subfamily."""
    supp = {i + 1 for i, e in enumerate(x) if e}
    for r in range(len(sets) + 1):
        for fam in itertools.combinations(sets, r):
            if supp <= set().union(*fam) if fam else not supp:
                return r
    raise ValueError("not coverable")


def span(rows, q, n):
    out = set()
    for coeffs in itertools.product(range(q), repeat=len(rows)):
        v = [0] * n
        for c, r in zip(coeffs, rows):
            for i in range(n):
                v[i] = (v[i] + c * r[i]) % q
        out.add(tuple(v))
    return out


def orthogonal_complement(rows, q, n):
    return {
        v for v in all_vectors(q, n)
        if all(sum(a * b for a, b in zip(v, r)) % q == 0 for r in rows)
    }


def gaussian_binomial(n, k, q):
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def subspace_count(n, q, max_dim=None):
    max_dim = n if max_dim is None else max_dim
    return sum(gaussian_binomial(n, k, q) for k in range(max_dim + 1))


def mat_vec(x, m, q):
    """Row vector times matrix."""
    n = len(m[0])
    return tuple(sum(x[i] * m[i][j] for i in range(len(x))) % q for j in range(n))


def mat_mul(a, b, q):
    return tuple(mat_vec(row, b, q) for row in a)


def is_isometry(sets, m, q):
    n = len(m)
    return all(naive_weight(sets, mat_vec(x, m, q)) == naive_weight(sets, x) for x in all_vectors(q, n))


def intersection_components(sets):
    """Connected components of the intersection graph by BFS over indices."""
    remaining = set(range(len(sets)))
    comps = []
    while remaining:
        start = min(remaining)
        comp, frontier = {start}, [start]
        remaining.discard(start)
        while frontier:
            a = frontier.pop()
            for b in list(remaining):
                if set(sets[a]) & set(sets[b]):
                    remaining.discard(b)
                    comp.add(b)
                    frontier.append(b)
        comps.append(sorted(comp))
    return comps


def antichain_coverings(n):
    """All covering antichains of nonempty subsets of [n], by filtering every family."""
    subsets = [frozenset(s) for r in range(1, n + 1) for s in itertools.combinations(range(1, n + 1), r)]
    out = []
    for bits in range(1, 1 << len(subsets)):
        fam = [subsets[i] for i in range(len(subsets)) if bits >> i & 1]
        if set().union(*fam) != set(range(1, n + 1)):
            continue
        if any(a < b for a in fam for b in fam):
            continue
        out.append(frozenset(fam))
    return out
