import json

import pytest
from hypothesis import given, strategies as st

from plabic_dimer.collection import enumerate_maximal_collections, is_maximal
from plabic_dimer.dimer import check_dimer_axioms, gamma_of_collection, strands
from plabic_dimer.errors import InvalidInput
from plabic_dimer.moves import geometric_exchange
from plabic_dimer.surface import (Triangulation, all_disk_triangulations, annulus_triangulation, disk_agreement,
                                  disk_triangulation, fan_triangulation, flip, flip_exchange_commutes, flip_graph,
                                  lambda_presentation, lambda_relation_check, marker_numbers, scott_quiver)


def catalan(m):
    out = 1
    for i in range(m):
        out = out * 2 * (2 * i + 1) // (i + 2)
    return out


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_disk_triangulation_count(n):
    assert len(all_disk_triangulations(n)) == catalan(n - 2)


def test_fan_pentagon_gives_maximal_collection():
    agree = disk_agreement(fan_triangulation(5))
    assert agree.agrees
    assert is_maximal(agree.collection)
    assert agree.collection in enumerate_maximal_collections(2, 5)


def test_strands_go_two_steps(fig):
    T = fan_triangulation(6)
    Q = scott_quiver(T)
    marks = marker_numbers(T, Q)
    assert sorted((s.start_marker, s.end_marker) for s in strands(Q, marks)) == \
        [(j, (j + 1) % 6 + 1) for j in range(1, 7)]


@pytest.mark.parametrize("n", [4, 5, 6])
def test_every_disk_matches_clique_construction(n):
    labels = set()
    for T in all_disk_triangulations(n):
        agree = disk_agreement(T)
        assert agree.agrees
        labels.add(tuple(agree.collection.labels()))
    assert len(labels) == len(enumerate_maximal_collections(2, n))


def test_square_flip():
    T = disk_triangulation(4, [(1, 3)])
    F = flip(T, "d1.3")
    assert set(F.edges["d1.3"].endpoints) == {"p2", "p4"}
    twice = flip(F, "d1.3")
    assert set(twice.edges["d1.3"].endpoints) == {"p1", "p3"}
    assert disk_agreement(twice).collection == disk_agreement(T).collection
    A, B = disk_agreement(T), disk_agreement(F)
    C2, _ = geometric_exchange(A.collection, gamma_of_collection(A.collection), A.rename["d1.3"])
    assert C2 == B.collection


def test_flip_rejects_boundary():
    T = fan_triangulation(5)
    with pytest.raises(InvalidInput):
        flip(T, "b1")
    with pytest.raises(InvalidInput):
        flip(T, "nope")


def test_pentagon_flip_graph():
    nodes, edges = flip_graph(fan_triangulation(5))
    assert len(nodes) == 5 and len(edges) == 5


@pytest.mark.parametrize("n", [4, 5, 6])
def test_flips_commute_with_exchange(n):
    for T in all_disk_triangulations(n):
        for e in sorted(x.id for x in T.edges.values() if not x.boundary):
            assert flip_exchange_commutes(T, e)


@given(st.integers(5, 7), st.lists(st.integers(0, 100), max_size=6))
def test_flip_sequences_stay_valid(n, picks):
    T = fan_triangulation(n)
    for p in picks:
        arcs = sorted(e.id for e in T.edges.values() if not e.boundary)
        T = flip(T, arcs[p % len(arcs)])
        assert disk_agreement(T).agrees


def test_triangulation_json_roundtrip():
    T = annulus_triangulation(2, 2, "oioi")
    R = Triangulation.from_json(T.to_json())
    assert R == T
    data = json.loads(T.to_json())
    data["triangles"] = data["triangles"][:-1]
    with pytest.raises(InvalidInput):
        Triangulation.from_json(json.dumps(data))
    with pytest.raises(InvalidInput):
        Triangulation.from_json("{}")


@pytest.mark.parametrize("n,m", [(1, 1), (2, 1), (1, 2), (2, 2), (3, 2)])
def test_annulus_quiver_axioms(n, m):
    for T in (annulus_triangulation(n, m), flip(annulus_triangulation(n, m), "a0")):
        Q = scott_quiver(T)  # also runs the degree-2 strand check per component
        assert check_dimer_axioms(Q, allow_boundary_loops=True).ok
        assert len(Q.vertices) == 2 * (n + m)


def test_presentation_shape():
    P = lambda_presentation(8, 6)
    assert len(P.relations) == 2 * (8 + 6) + 4
    assert P.endpoints(("r",)) == (1, ("in", 1))
    assert P.endpoints(("s",)) == (("in", 6), 8)
    small = lambda_presentation(1, 1)
    assert len(small.relations) == 8
    for rel in small.relations:
        assert small.word_endpoints(rel.lhs) == small.word_endpoints(rel.rhs)
    with pytest.raises(InvalidInput):
        lambda_presentation(0, 1)


@given(st.integers(1, 6), st.integers(1, 6))
def test_presentation_relations_compose(n, m):
    P = lambda_presentation(n, m)
    for rel in P.relations:
        assert P.word_endpoints(rel.lhs) == P.word_endpoints(rel.rhs)


@pytest.mark.parametrize("n,m,words", [(1, 1, ("oi",)), (2, 1, ("ooi",)), (2, 2, ("ooii", "oioi")), (8, 6, (None,))])
def test_annulus_relations_confirmed(n, m, words):
    reports = []
    for w in words:
        T = annulus_triangulation(n, m, w)
        for X in (T, flip(T, "a0")):
            rep = lambda_relation_check(X, budget=100_000)
            assert rep.confirmed, [r for r in rep.summary() if r[1] != "equivalent"]
            reports.append(rep.summary())
    assert all(r == reports[0] for r in reports)


def test_annulus_check_needs_annulus():
    with pytest.raises(InvalidInput):
        lambda_relation_check(fan_triangulation(5))
