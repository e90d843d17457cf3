import pytest
from hypothesis import given, strategies as st

from plabic_dimer.cyclic import (Weight, closed_interval, full_weight, interval_vertices, open_interval,
                                 reduce_index, rotate_weight, weight_sub_scalar, weight_sum)
from plabic_dimer.errors import InvalidInput


def test_interval_examples():
    assert interval_vertices(1, 4, 7).support() == {1, 2, 3}
    assert interval_vertices(7, 1, 7).support() == {7}
    assert interval_vertices(3, 3, 7).is_zero()


def test_full_weight():
    assert full_weight(3).counts == (1, 1, 1)
    assert full_weight(7).counts == (1,) * 7
    assert full_weight(5).support() == set(range(1, 6))
    with pytest.raises(InvalidInput):
        full_weight(0)


def test_sub_scalar_examples():
    base, N = weight_sub_scalar(Weight((2, 3, 2)))
    assert base.counts == (0, 1, 0) and N == 2
    assert weight_sub_scalar(Weight.zero(4)) == (Weight.zero(4), 0)
    w = Weight((1, 2, 2, 3, 2, 1, 0))
    assert weight_sub_scalar(w) == (w, 0)


def test_mismatched_moduli():
    with pytest.raises(InvalidInput):
        Weight((1, 0)) + Weight((1, 0, 0))
    with pytest.raises(InvalidInput):
        interval_vertices(0, 3, 5)


def test_open_and_closed():
    assert closed_interval(6, 2, 7) == [6, 7, 1, 2]
    assert open_interval(6, 2, 7) == [6, 7, 1]
    assert reduce_index(0, 7) == 7 and reduce_index(8, 7) == 1


@st.composite
def interval_args(draw):
    n = draw(st.integers(1, 12))
    return n, draw(st.integers(1, n)), draw(st.integers(1, n))


@given(interval_args())
def test_interval_is_brute_force_walk(args):
    n, a, b = args
    # walk clockwise from a, stopping before b
    expect, v = set(), a
    while v != b:
        expect.add(v)
        v = v % n + 1
    assert interval_vertices(a, b, n).support() == expect


@given(interval_args(), st.integers(0, 12))
def test_interval_rotation(args, s):
    n, a, b = args
    rot = lambda i: (i - 1 + s) % n + 1
    assert interval_vertices(rot(a), rot(b), n) == rotate_weight(interval_vertices(a, b, n), s)


@given(interval_args())
def test_complementary_intervals_cover(args):
    n, a, b = args
    total = interval_vertices(a, b, n) + interval_vertices(b, a, n)
    assert total == (Weight.zero(n) if a == b else full_weight(n))


@given(st.lists(st.integers(0, 5), min_size=1, max_size=9), st.integers(0, 4))
def test_sub_scalar_roundtrip(counts, extra):
    w = Weight(tuple(counts))
    base, N = weight_sub_scalar(w + full_weight(len(counts)).scale(extra))
    assert base.min() == 0
    assert base + full_weight(len(counts)).scale(N) == w + full_weight(len(counts)).scale(extra)


@given(st.lists(st.lists(st.integers(0, 3), min_size=4, max_size=4), max_size=6))
def test_weight_sum_matches_addition(rows):
    ws = [Weight(tuple(r)) for r in rows]
    acc = Weight.zero(4)
    for w in ws:
        acc = acc + w
    assert weight_sum(ws, 4) == acc
