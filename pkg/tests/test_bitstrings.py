import pytest
from hypothesis import given
from hypothesis import strategies as st

from clonetrade.bitstrings import (
    BitString,
    binom,
    complement,
    dot,
    enumerate_weight,
    index_of,
    intersection,
    set_ops,
    union,
    weight,
)

bits = st.integers(1, 8).flatmap(lambda n: st.tuples(st.lists(st.integers(0, 1), min_size=n, max_size=n), st.lists(st.integers(0, 1), min_size=n, max_size=n)))


def test_parse_and_str_round_trip():
    x = BitString.parse("0110")
    assert str(x) == "0110"
    assert x.weight == 2
    assert x.sites == (1, 2)
    assert BitString.from_sites(4, [1, 2]) == x


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        BitString.parse("01a1")


def test_set_operations():
    assert dot("1100", "0110") == 1
    assert str(union("1100", "0110")) == "1110"
    assert str(intersection("1100", "0110")) == "0100"
    assert str(complement("1100")) == "0011"
    u, i, c = set_ops("1010", "0011")
    assert (str(u), str(i), str(c)) == ("1011", "0010", "0101")


def test_length_mismatch():
    with pytest.raises(ValueError):
        dot("101", "10")


def test_binom_outside_range_is_zero():
    assert binom(5, -1) == 0
    assert binom(3, 4) == 0
    assert binom(6, 3) == 20


def test_enumeration_is_sorted_and_complete():
    xs = enumerate_weight(4, 2)
    assert [str(x) for x in xs] == ["0011", "0101", "0110", "1001", "1010", "1100"]
    assert [index_of(x) for x in xs] == list(range(6))


def test_enumeration_errors():
    with pytest.raises(ValueError):
        enumerate_weight(3, 4)
    with pytest.raises(ValueError):
        enumerate_weight(0, 0)


@given(bits)
def test_inclusion_exclusion(pair):
    x, y = (BitString(tuple(v)) for v in pair)
    assert weight(union(x, y)) == x.weight + y.weight - dot(x, y)
    assert dot(x, complement(x)) == 0


@given(st.integers(1, 10), st.data())
def test_counts_match_binomial(N, data):
    w = data.draw(st.integers(0, N))
    assert len(enumerate_weight(N, w)) == binom(N, w)
