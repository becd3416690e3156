import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from combmetric.errors import CapExceeded, Singular
from combmetric.gf import (
    FieldContext,
    apply,
    enumerate_vectors,
    in_rowspace,
    invert,
    nullspace,
    rank,
    rref,
)

from oracles import all_vectors, orthogonal_complement, span

F2, F3 = FieldContext(2), FieldContext(3)


@pytest.mark.parametrize("q", [0, 1, 4, 9, 257])
def test_field_rejects_non_primes(q):
    with pytest.raises(ValueError):
        FieldContext(q)


def test_inverses_mod_p():
    for q in (2, 3, 5, 7, 251):
        ctx = FieldContext(q)
        for a in range(1, q):
            assert a * ctx.inv(a) % q == 1


def test_rref_identity():
    m, piv = rref(F2.identity(2))
    assert m == F2.identity(2)
    assert piv == [0, 1]


def test_rref_duplicate_rows_collapse():
    m, piv = rref(F2.matrix([[1, 1, 0, 0], [1, 1, 0, 0]]))
    assert m.rows == ((1, 1, 0, 0),)
    assert piv == [0]


def test_rref_dependent_rows_over_f3():
    # by hand: (1,2) = 2*(2,1) mod 3; scaling (2,1) by 2 gives (1,2)
    m, piv = rref(F3.matrix([[2, 1], [1, 2]]))
    assert m.rows == ((1, 2),)
    assert piv == [0]


def test_nullspace_identity_is_zero():
    assert nullspace(F2.identity(3)).nrows == 0


def test_nullspace_single_row_11():
    ns = nullspace(F2.matrix([[1, 1]]))
    assert span(ns.rows, 2, 2) == orthogonal_complement([(1, 1)], 2, 2) == {(0, 0), (1, 1)}


def test_nullspace_1100():
    ns = nullspace(F2.matrix([[1, 1, 0, 0]]))
    expected = orthogonal_complement([(1, 1, 0, 0)], 2, 4)
    assert ns.nrows == 3
    assert span(ns.rows, 2, 4) == expected
    for v in [(1, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]:
        assert v in expected


def test_invert_examples():
    assert invert(F2.identity(3)) == F2.identity(3)
    swap = F2.matrix([[0, 1], [1, 0]])
    assert invert(swap) == swap
    u = F2.matrix([[1, 1], [0, 1]])
    assert invert(u) == u
    assert u @ u == F2.identity(2)


def test_invert_singular():
    with pytest.raises(Singular):
        invert(F3.matrix([[1, 2], [2, 1]]))


def test_enumerate_vectors_counts_and_order():
    assert [v.entries for v in enumerate_vectors(F2, 1)] == [(0,), (1,)]
    assert len(list(enumerate_vectors(F2, 2))) == 4
    vs = [v.entries for v in enumerate_vectors(F3, 2)]
    assert len(vs) == 9 and vs[0] == (0, 0) and vs[-1] == (2, 2)
    assert vs == sorted(vs) == all_vectors(3, 2)


def test_enumerate_vectors_cap():
    with pytest.raises(CapExceeded):
        list(enumerate_vectors(F2, 10, cap=100))


def test_vector_support_is_one_based():
    assert F3.vector([0, 2, 0, 1]).support() == {2, 4}


matrices = st.sampled_from([2, 3, 5]).flatmap(
    lambda q: st.tuples(
        st.just(q),
        st.integers(1, 4).flatmap(
            lambda r: st.integers(1, 4).flatmap(
                lambda c: st.lists(
                    st.lists(st.integers(0, q - 1), min_size=c, max_size=c), min_size=r, max_size=r
                )
            )
        ),
    )
)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_rref_preserves_rowspace(data):
    q, rows = data
    ctx = FieldContext(q)
    m = ctx.matrix(rows)
    r, piv = rref(m)
    assert piv == sorted(piv)
    for row in m.row_vectors():
        assert in_rowspace(row, r)
    assert span(r.rows, q, m.ncols) == span(m.rows, q, m.ncols)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_nullspace_orthogonal_and_rank_nullity(data):
    q, rows = data
    ctx = FieldContext(q)
    m = ctx.matrix(rows)
    ns = nullspace(m)
    for u in ns.row_vectors():
        for row in m.row_vectors():
            assert u.dot(row) == 0
    assert rank(m) + rank(ns) == m.ncols if ns.nrows else rank(m) == m.ncols


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([2, 3, 5]).flatmap(
    lambda q: st.tuples(st.just(q), st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(0, q - 1), min_size=n, max_size=n), min_size=n, max_size=n)))))
def test_invert_fails_exactly_when_rank_deficient(data):
    q, rows = data
    ctx = FieldContext(q)
    m = ctx.matrix(rows)
    if rank(m) < m.nrows:
        with pytest.raises(Singular):
            invert(m)
    else:
        assert invert(m) @ m == ctx.identity(m.nrows)


def test_apply_is_row_action():
    m = F3.matrix([[1, 2], [0, 1]])
    assert apply(F3.vector([1, 1]), m).entries == (1, 0)
