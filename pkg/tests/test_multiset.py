import pytest
from hypothesis import given
from hypothesis import strategies as st

from refnets.multiset import EMPTY, Multiset


def ms(**counts):
    return Multiset(counts)


def test_sum_examples():
    assert ms(x=2, y=1) + ms(x=1) == ms(x=3, y=1)
    assert EMPTY + EMPTY == EMPTY
    assert ms(x=1) + ms(y=1) == ms(x=1, y=1)


def test_union_examples():
    assert ms(x=2).union(ms(x=1, y=3)) == ms(x=2, y=3)
    a = ms(x=2, y=1)
    assert a.union(a) == a
    assert EMPTY.union(ms(z=1)) == ms(z=1)


def test_subtract_examples():
    assert ms(x=1) - ms(x=3) == EMPTY
    assert ms(x=3, y=1) - ms(x=1) == ms(x=2, y=1)
    assert ms(x=2) - EMPTY == ms(x=2)


def test_leq_examples():
    assert ms(x=1) <= ms(x=2, y=1)
    assert not (ms(x=3) <= ms(x=2))
    assert EMPTY <= ms(anything=5)
    assert EMPTY <= EMPTY


def test_no_zero_entries_stored():
    m = Multiset({"x": 0, "y": 2})
    assert "x" not in m
    assert m.count("x") == 0
    assert len(m) == 2


def test_negative_count_rejected():
    with pytest.raises(ValueError):
        Multiset({"x": -1})
    with pytest.raises(ValueError):
        Multiset({"x": 1.5})


def test_size_is_sum_of_counts():
    assert len(ms(a=2, b=3)) == 5
    assert len(EMPTY) == 0


def test_equality_and_hash_ignore_construction_order():
    a = Multiset(["x", "y", "x"])
    b = Multiset({"y": 1, "x": 2})
    assert a == b
    assert hash(a) == hash(b)


def test_expand_and_items():
    m = ms(a=2, b=1)
    assert sorted(m.expand()) == ["a", "a", "b"]
    assert dict(m.items()) == {"a": 2, "b": 1}


elems = st.sampled_from(["a", "b", "c", "d"])
multisets = st.dictionaries(elems, st.integers(min_value=1, max_value=5)).map(Multiset)


@given(multisets, multisets)
def test_sum_commutative(a, b):
    assert a + b == b + a


@given(multisets, multisets, multisets)
def test_sum_associative(a, b, c):
    assert (a + b) + c == a + (b + c)


@given(multisets)
def test_sum_identity(a):
    assert a + EMPTY == a


@given(multisets, multisets)
def test_leq_of_sum(a, b):
    assert a <= a + b


@given(multisets, multisets)
def test_subtract_leq(a, b):
    assert (a - b) <= a


@given(multisets, multisets)
def test_subtraction_inverts_sum_when_included(a, b):
    if b <= a:
        assert (a - b) + b == a


@given(multisets, multisets, multisets)
def test_union_laws(a, b, c):
    assert a.union(a) == a
    assert a.union(b) == b.union(a)
    assert a.union(b).union(c) == a.union(b.union(c))
