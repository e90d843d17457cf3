import itertools

import pytest
from hypothesis import given, strategies as st

from plabic_dimer.collection import Collection, boundary_label, enumerate_maximal_collections, parse_label
from plabic_dimer.cyclic import Weight, full_weight, weight_sum
from plabic_dimer.dimer import (MINUS, PLUS, Face, QuiverWithFaces, Vertex, arrow_weight, arrow_weights,
                                check_dimer_axioms, check_postnikov_axioms, collection_of, face_weight,
                                gamma_of_collection, labelled_checks, perfect_matching, plabic_dual,
                                quiver_from_plabic, strand_left_sets, strands, vertex_star, vertex_weight_sums)
from plabic_dimer.errors import InvalidInput

# arrow -> weight, read off the weights figure of the (3,7) example
FIGURE_WEIGHTS = {
    ("671", "567"): "1234", ("234", "123"): "4567", ("345", "234"): "5671", ("567", "156"): "7",
    ("156", "456"): "123", ("245", "345"): "2", ("124", "234"): "12", ("124", "712"): "456",
    ("671", "712"): "671", ("712", "123"): "712", ("345", "456"): "345", ("456", "567"): "456",
    ("456", "145"): "67", ("234", "245"): "34", ("123", "124"): "3", ("157", "671"): "5",
    ("145", "245"): "1", ("245", "124"): "567", ("145", "147"): "56", ("156", "157"): "6",
    ("157", "145"): "7123", ("124", "145"): "234", ("145", "156"): "45", ("147", "124"): "71",
    ("147", "157"): "4", ("712", "147"): "23",
}


def canon(label):
    return "".join(str(x) for x in sorted(parse_label(label, 7)))


def test_figure_counts_and_weights(fig):
    C, Q = fig
    assert (len(Q.vertices), len(Q.arrows), len(Q.faces)) == (13, 26, 14)
    got = {(a.tail, a.head): arrow_weight(Q, a.id) for a in Q.arrows.values()}
    expect = {(canon(t), canon(h)): Weight.from_support(parse_label(w, 7), 7) for (t, h), w in FIGURE_WEIGHTS.items()}
    assert got == expect


def test_figure_face_weight(fig):
    _, Q = fig
    w = arrow_weights(Q)
    for f in Q.faces:
        assert face_weight(Q, f, w) == full_weight(7)
    cycle = [("567", "156"), ("156", "157"), ("157", "167"), ("167", "567")]
    ids = [next(a.id for a in Q.arrows.values() if (a.tail, a.head) == e) for e in cycle]
    assert weight_sum((w[a] for a in ids), 7) == full_weight(7)
    assert any(set(f.arrows) == set(ids) for f in Q.faces.values())


def test_figure_strands(fig):
    C, Q = fig
    sts = strands(Q)
    assert len(sts) == 7
    assert all(s.end_marker == (s.start_marker + 2) % 7 + 1 for s in sts)
    assert check_postnikov_axioms(sts, Q, 3, 7).ok
    labels = strand_left_sets(Q, sts)
    assert all(labels[v] == Q.label(v) for v in Q.vertices)


def test_figure_perfect_matching(fig):
    _, Q = fig
    P = perfect_matching(Q, 7).arrows
    pairs = {(Q.arrows[a].tail, Q.arrows[a].head) for a in P}
    assert {("567", "156"), ("157", "145")} <= pairs
    w = arrow_weights(Q)
    cover = {a: sum(a in perfect_matching(Q, i).arrows for i in range(1, 8)) for a in Q.arrows}
    assert all(cover[a] == len(w[a].support()) for a in Q.arrows)


def test_figure_stars(fig):
    _, Q = fig
    star = vertex_star(Q, "145")
    dirs = [d for _, d in star.half_edges]
    assert len(dirs) == 6 and all(dirs[t] != dirs[t - 1] for t in range(6))
    e1 = vertex_star(Q, "567")
    assert e1.is_boundary
    outs = [a for a, d in e1.half_edges if d == "out"]
    assert [Q.arrows[a].head for a in outs] == ["156"]
    assert set(e1.w_out) >= set(outs)


def test_figure_plabic_dual(fig):
    _, Q = fig
    G = plabic_dual(Q)
    colours = sorted(G.nodes.values())
    assert len(colours) == 14 and colours.count("black") == 7
    assert G.is_bipartite()
    assert quiver_from_plabic(G).same_as(Q)


def test_k1_triangle():
    C = Collection(1, 3, tuple(frozenset({i}) for i in range(1, 4)))
    Q = gamma_of_collection(C)
    assert (len(Q.vertices), len(Q.arrows), len(Q.faces)) == (3, 3, 1)
    assert all(a.is_boundary for a in Q.arrows.values())
    assert check_dimer_axioms(Q).ok
    # each strand enters at one boundary arrow, passes the single face, leaves at the next
    assert [len(s.faces[:-1]) for s in strands(Q)] == [1, 1, 1]
    assert face_weight(Q, next(iter(Q.faces))) == full_weight(3)


@pytest.mark.parametrize("k,n", [(2, 4), (2, 5), (2, 6), (3, 6)])
def test_sweep_all_identities(k, n):
    for C in enumerate_maximal_collections(k, n):
        Q = gamma_of_collection(C)
        assert len(Q.vertices) == k * (n - k) + 1
        for rep in labelled_checks(Q):
            assert rep.ok, (rep.name, rep.violations[:3])
        assert plabic_dual(Q).is_bipartite()
        assert collection_of(Q) == C
        for j in range(1, n + 1):
            assert Q.vertices[Q.boundary_vertex(j)].label == boundary_label(j, k, n)


def test_axiom_violations_reported(fig):
    _, Q = fig
    internal = next(a for a in Q.arrows.values() if not a.is_boundary)
    arrows = [(a.id, a.tail, a.head) for a in Q.arrows.values() if a.id != internal.id]
    faces = [Face(f.id, f.sign, tuple(x for x in f.arrows if x != internal.id)) for f in Q.faces.values()]
    broken = QuiverWithFaces.assemble(Q.vertices.values(), arrows, faces, Q.k, Q.n)
    assert not check_dimer_axioms(broken).ok
    loop = QuiverWithFaces.assemble([Vertex("a", None, True), Vertex("b", None, True)],
                                    [(0, "a", "a"), (1, "a", "b"), (2, "b", "a")],
                                    [Face(0, PLUS, (1, 2)), Face(1, MINUS, (0,))])
    assert any("(a)" in v for v in check_dimer_axioms(loop).violations)


def test_self_crossing_strand_reported(fig):
    _, Q = fig
    sts = strands(Q)
    s = sts[0]
    fake = type(s)(s.start_marker, s.end_marker, s.crossings + s.crossings[:1], s.faces + s.faces[:1], s.left, None)
    assert any("(b1)" in v for v in check_postnikov_axioms([fake] + sts[1:]).violations)


def test_nonmaximal_collection_rejected(fig):
    C, _ = fig
    smaller = Collection(3, 7, tuple(m for m in C.members if m != parse_label("145", 7)))
    with pytest.raises(InvalidInput):
        gamma_of_collection(smaller)


def test_json_roundtrip(fig):
    _, Q = fig
    R = QuiverWithFaces.from_json(Q.to_json())
    assert R.same_as(Q) and R.to_json() == Q.to_json()


def test_weight_sums_at_boundary(fig):
    _, Q = fig
    for v in Q.vertices:
        reps = vertex_weight_sums(Q, v)
        assert reps and all(r.ok for r in reps)
    kinds = {r.kind for r in vertex_weight_sums(Q, "567")}
    assert kinds == {"out", "in"}


@given(st.sampled_from([(2, 5), (2, 6), (3, 6)]), st.integers(0, 10_000))
def test_relabelled_rotation_is_isomorphic(kn, seed):
    """Rotating every label by s gives the same quiver up to renaming."""
    k, n = kn
    cols = enumerate_maximal_collections(k, n)
    C = cols[seed % len(cols)]
    s = seed % n
    rot = lambda I: frozenset((i - 1 + s) % n + 1 for i in I)
    R = Collection(k, n, tuple(rot(m) for m in C.members))
    Q, QR = gamma_of_collection(C), gamma_of_collection(R)
    name = lambda I: "".join(str(x) for x in sorted(I)) if n < 10 else None
    rename = {v: name(rot(Q.label(v))) for v in Q.vertices}
    assert Q.same_as(QR, rename)
