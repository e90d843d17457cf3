import itertools
import json

import pytest
from hypothesis import given, strategies as st

from plabic_dimer.collection import (Collection, ab_pair, boundary_label, build_maximal_collection,
                                     enumerate_maximal_collections, from_labels, is_maximal,
                                     is_weakly_separated, label_str, parse_label)
from plabic_dimer.cyclic import closed_interval, interval_vertices
from plabic_dimer.dimer import figure_collection
from plabic_dimer.errors import InvalidInput, ResourceGuard


def crosses(I, J, n):
    """Brute force: a < b < c < d on the circle with a, c in I-J and b, d in J-I."""
    A, B = I - J, J - I
    for a, b, c, d in itertools.permutations(range(1, n + 1), 4):
        if a in A and c in A and b in B and d in B:
            # clockwise order a, b, c, d starting from a
            pos = lambda x: (x - a) % n
            if pos(b) < pos(c) < pos(d):
                return True
    return False


def test_separation_examples():
    S = lambda *x: frozenset(x)
    assert is_weakly_separated(S(1, 3), S(1, 3))
    assert not is_weakly_separated(S(1, 3), S(2, 4))
    assert is_weakly_separated(S(1, 5, 6), S(4, 5, 6))
    with pytest.raises(InvalidInput):
        is_weakly_separated(S(1, 2), S(1, 2, 3))


@pytest.mark.parametrize("k,n", [(2, 5), (3, 6), (3, 7), (2, 6)])
def test_separation_matches_brute_force(k, n):
    subsets = [frozenset(c) for c in itertools.combinations(range(1, n + 1), k)]
    for I in subsets:
        for J in subsets:
            assert is_weakly_separated(I, J) == (not crosses(I, J, n))


def test_boundary_labels():
    assert boundary_label(7, 3, 7) == {5, 6, 7}
    assert boundary_label(1, 3, 7) == {6, 7, 1}
    assert boundary_label(3, 3, 7) == {1, 2, 3}
    assert boundary_label(1, 2, 4) == {4, 1}
    for j in range(1, 8):
        assert boundary_label(j, 3, 7) == set(closed_interval((j - 3) % 7 + 1, j, 7))


def test_ab_pair_examples():
    S = lambda *x: frozenset(x)
    assert ab_pair(S(5, 6, 7), S(4, 5, 6), 7) == (4, 7)
    assert ab_pair(S(1, 2, 4), S(5, 6, 7), 7) == (7, 1)
    assert ab_pair(S(1, 2), S(2, 3), 4) == (3, 1)
    with pytest.raises(InvalidInput):
        ab_pair(S(1, 2), S(1, 2), 4)
    with pytest.raises(InvalidInput):
        ab_pair(S(1, 3), S(2, 4), 4)


def hull(S, T, n):
    """Smallest cyclic interval containing S and avoiding T, by trying every start and length."""
    for length in range(1, n + 1):
        for start in range(1, n + 1):
            iv = {(start - 1 + t) % n + 1 for t in range(length)}
            if S <= iv and not iv & T:
                return start, (start + length - 2) % n + 1
    raise AssertionError


@pytest.mark.parametrize("k,n", [(2, 5), (3, 6), (3, 7)])
def test_ab_pair_against_hulls(k, n):
    subsets = [frozenset(c) for c in itertools.combinations(range(1, n + 1), k)]
    for I in subsets:
        for J in subsets:
            if I == J or not is_weakly_separated(I, J):
                continue
            a, b = ab_pair(I, J, n)
            assert b == hull(I - J, J - I, n)[0]
            assert a == hull(J - I, I - J, n)[1]
            a2, b2 = ab_pair(J, I, n)
            first, second = interval_vertices(a, b, n), interval_vertices(a2, b2, n)
            assert not first.is_zero()
            assert not (first.support() & second.support())


def brute_force_maximal_count(k, n):
    """Count pairwise separated families of size k(n-k)+1 among all k-subsets."""
    subsets = [frozenset(c) for c in itertools.combinations(range(1, n + 1), k)]
    boundary = {boundary_label(j, k, n) for j in range(1, n + 1)}
    inner = [s for s in subsets if s not in boundary]
    need = k * (n - k) + 1 - n
    return sum(1 for fam in itertools.combinations(inner, need)
               if all(is_weakly_separated(a, b) for a, b in itertools.combinations(fam, 2)))


@pytest.mark.parametrize("k,n", [(2, 4), (2, 5), (2, 6), (3, 6), (1, 5)])
def test_enumeration_counts(k, n):
    cols = enumerate_maximal_collections(k, n)
    assert len(cols) == brute_force_maximal_count(k, n)
    assert all(is_maximal(C) and len(C) == k * (n - k) + 1 for C in cols)


def test_enumeration_examples():
    cols = enumerate_maximal_collections(2, 4, limit=10)
    assert len(cols) == 2
    diag = {frozenset({1, 3}), frozenset({2, 4})}
    assert [set(C.members) & diag for C in cols] in ([{frozenset({1, 3})}, {frozenset({2, 4})}],
                                                     [{frozenset({2, 4})}, {frozenset({1, 3})}])
    assert len(enumerate_maximal_collections(2, 5, limit=100)) == 5
    assert len(enumerate_maximal_collections(1, 5)) == 1
    with pytest.raises(ResourceGuard):
        enumerate_maximal_collections(5, 12)


def test_build_maximal_examples():
    C = build_maximal_collection(2, 4)
    assert len(C) == 5 and is_maximal(C)
    assert len({frozenset({1, 3}), frozenset({2, 4})} & set(C.members)) == 1
    F = figure_collection()
    assert build_maximal_collection(3, 7, F) == F
    assert build_maximal_collection(1, 6).members == tuple(frozenset({i}) for i in range(1, 7))
    with pytest.raises(InvalidInput):
        build_maximal_collection(2, 4, [{1, 3}, {2, 4}])


@given(st.integers(4, 7), st.data())
def test_build_from_random_seed_is_maximal(n, data):
    k = data.draw(st.integers(1, n - 1))
    subsets = [frozenset(c) for c in itertools.combinations(range(1, n + 1), k)]
    seed = []
    for s in data.draw(st.lists(st.sampled_from(subsets), max_size=4)):
        if all(is_weakly_separated(s, t) for t in seed):
            seed.append(s)
    C = build_maximal_collection(k, n, seed)
    assert is_maximal(C) and set(seed) <= set(C.members)
    assert len(C) == k * (n - k) + 1


def test_json_roundtrip_and_labels():
    F = figure_collection()
    text = F.to_json()
    data = json.loads(text)
    assert data["labels"] == sorted(data["labels"])
    assert Collection.from_json(text) == F
    assert parse_label("567", 7) == {5, 6, 7}
    assert label_str({1, 6, 7}, 7) == "167"
    assert from_labels(2, 4, ["12", "23"]).members[0] == {1, 2}
    with pytest.raises(InvalidInput):
        Collection.from_json('{"k": 2}')
