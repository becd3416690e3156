import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from combmetric.code import (
    LinearCode,
    all_subspaces,
    code_from_json,
    count_rref_profiles,
    dual,
    from_generators,
    load_code,
    span_of_units,
)
from combmetric.errors import CapExceeded
from combmetric.gf import FieldContext

from oracles import all_vectors, orthogonal_complement, span, subspace_count

F2, F3 = FieldContext(2), FieldContext(3)


def words(c):
    return {v.entries for v in c.codewords()}


def test_from_generators_examples():
    e1 = [1, 0, 0, 0]
    assert from_generators(F2, 4, [e1]).k == 1
    assert from_generators(F2, 4, [e1, e1]).k == 1
    assert from_generators(F3, 3, [[1, 1, 0]]).generator.rows == ((1, 1, 0),)


def test_codewords_examples():
    assert words(from_generators(F2, 3, [])) == {(0, 0, 0)}
    assert words(from_generators(F2, 4, [[1, 1, 0, 0]])) == {(0, 0, 0, 0), (1, 1, 0, 0)}
    assert len(words(from_generators(F3, 2, [[1, 0], [0, 1]]))) == 9


def test_equal_spans_give_equal_codes():
    a = from_generators(F3, 3, [[1, 2, 0], [0, 1, 1]])
    b = from_generators(F3, 3, [[1, 0, 1], [0, 2, 2]])
    assert words(a) == words(b)
    assert a == b


def test_dual_examples():
    zero = from_generators(F2, 3, [])
    assert dual(zero).k == 3
    assert dual(span_of_units(F2, 4, [1])) == span_of_units(F2, 4, [2], [3], [4])
    d = dual(span_of_units(F2, 2, [1, 2]))
    assert words(d) == orthogonal_complement([(1, 1)], 2, 2) == {(0, 0), (1, 1)}


def test_contains():
    c = span_of_units(F3, 4, [1, 2], [3])
    assert c.contains(F3.vector([2, 2, 1, 0]))
    assert not c.contains(F3.vector([1, 2, 0, 0]))


def test_json(tmp_path):
    c = span_of_units(F3, 3, [1, 2])
    p = tmp_path / "c.json"
    p.write_text('{"q": 3, "n": 3, "generators": [[2, 2, 0]]}')
    assert load_code(p) == c
    assert code_from_json(c.to_json()) == c
    with pytest.raises(ValueError):
        code_from_json({"n": 3})


def test_subspace_counts():
    assert len(list(all_subspaces(F2, 2))) == 5
    assert len(list(all_subspaces(F2, 4))) == 67 == subspace_count(4, 2)
    assert [c.k for c in all_subspaces(F2, 4, max_dim=0)] == [0]
    for q, n in [(2, 3), (3, 3), (2, 5), (5, 2)]:
        assert count_rref_profiles(q, n) == subspace_count(n, q)
        assert len(list(all_subspaces(FieldContext(q), n))) == subspace_count(n, q)


def test_subspaces_match_span_enumeration():
    # every subset of F_2^3 closed under addition and containing 0
    vecs = all_vectors(2, 3)
    closed = set()
    for bits in range(1 << len(vecs)):
        s = {v for i, v in enumerate(vecs) if bits >> i & 1}
        if (0, 0, 0) in s and all(tuple((a + b) % 2 for a, b in zip(x, y)) in s for x in s for y in s):
            closed.add(frozenset(s))
    mine = {frozenset(words(c)) for c in all_subspaces(F2, 3)}
    assert mine == closed


def test_subspace_cap():
    with pytest.raises(CapExceeded):
        list(all_subspaces(F3, 5, cap=100))


codes = st.sampled_from([2, 3]).flatmap(
    lambda q: st.tuples(
        st.just(q),
        st.integers(1, 4).flatmap(
            lambda n: st.tuples(
                st.just(n),
                st.lists(st.lists(st.integers(0, q - 1), min_size=n, max_size=n), max_size=3),
            )
        ),
    )
)


@settings(max_examples=150, deadline=None)
@given(codes)
def test_dual_matches_enumeration_and_is_involutive(data):
    q, (n, rows) = data
    c = from_generators(FieldContext(q), n, rows)
    assert words(c) == span([tuple(r) for r in rows], q, n)
    d = dual(c)
    assert c.k + d.k == n
    assert words(d) == orthogonal_complement(rows, q, n)
    assert dual(d) == c
