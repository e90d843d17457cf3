import random

import pytest
from hypothesis import given, strategies as st

from plabic_dimer.algebra import (NormalForm, Verdict, boundary_algebra, boundary_generators,
                                  central_element_check, compose_normal_forms, face_loop_path, graded_hom_dim,
                                  make_path, minimal_path, normalize, path_from_vertices, path_weight,
                                  random_path_pairs, relations, rewrite_equiv)
from plabic_dimer.cmrank1 import deg_min, deg_min_oracle
from plabic_dimer.collection import Collection, enumerate_maximal_collections
from plabic_dimer.cyclic import Weight, full_weight
from plabic_dimer.dimer import arrow_weights, gamma_of_collection
from plabic_dimer.errors import InvalidInput

W7 = lambda *s: Weight.from_support(s, 7)


def test_path_weight_examples(fig):
    _, Q = fig
    assert path_weight(Q, make_path(Q, [], "567")).is_zero()
    assert path_weight(Q, path_from_vertices(Q, ["567", "156", "456"])) == W7(1, 2, 3, 7)
    for f in Q.faces.values():
        assert path_weight(Q, make_path(Q, f.arrows)) == full_weight(7)
    with pytest.raises(InvalidInput):
        make_path(Q, [0, 0])


def test_minimal_path_examples(fig):
    _, Q = fig
    assert minimal_path(Q, "567", "567").arrows == ()
    p = minimal_path(Q, "567", "456")
    verts = ["567"] + [Q.arrows[a].head for a in p.arrows]
    assert verts == ["567", "156", "456"]
    assert path_weight(Q, p) == W7(7, 1, 2, 3) == deg_min_oracle(Q.label("567"), Q.label("456"), 7)


def test_normalize_examples(fig):
    _, Q = fig
    loop = path_from_vertices(Q, ["567", "156", "456", "567"])
    assert normalize(Q, loop) == NormalForm("567", "567", 1)
    for v in Q.vertices:
        for f in Q.faces_at(v):
            assert normalize(Q, make_path(Q, Q.face_loop(f, v), v)) == NormalForm(v, v, 1)
    assert normalize(Q, minimal_path(Q, "124", "167")).N == 0


def test_every_pair_has_an_insincere_minimal_path(swept):
    for C, Q in swept:
        for u in Q.vertices:
            for v in Q.vertices:
                p = minimal_path(Q, u, v)
                w = path_weight(Q, p)
                assert w == deg_min(Q.label(u), Q.label(v), C.n)
                assert u == v or w.min() == 0
                assert normalize(Q, p).N == 0


def test_arrow_weight_equals_degree(swept):
    for C, Q in swept:
        w = arrow_weights(Q)
        for a in Q.arrows.values():
            assert w[a.id] == deg_min(Q.label(a.tail), Q.label(a.head), C.n)


def test_rewrite_examples(fig):
    _, Q = fig
    p = minimal_path(Q, "567", "456")
    assert rewrite_equiv(Q, p, p, budget=0).verdict == Verdict.EQUIVALENT
    rel = relations(Q)[0]
    a = Q.arrows[rel.arrow]
    left = make_path(Q, (rel.arrow,) + rel.plus)
    right = make_path(Q, (rel.arrow,) + rel.minus)
    assert rewrite_equiv(Q, left, right, budget=1).verdict == Verdict.EQUIVALENT
    with pytest.raises(InvalidInput):
        rewrite_equiv(Q, make_path(Q, [rel.arrow]), p)


@pytest.mark.parametrize("k,n", [(2, 4), (2, 5)])
def test_rewriting_agrees_with_normal_forms(k, n):
    seen = {v: 0 for v in Verdict}
    for C in enumerate_maximal_collections(k, n):
        Q = gamma_of_collection(C)
        for p, q in random_path_pairs(Q, 100, 10, random.Random(1)):
            res = rewrite_equiv(Q, p, q, 100_000)
            seen[res.verdict] += 1
            if res.concluded:
                assert (res.verdict == Verdict.EQUIVALENT) == (normalize(Q, p) == normalize(Q, q))
    assert seen[Verdict.EQUIVALENT] and seen[Verdict.NOT_EQUIVALENT]


def test_graded_hom_examples(fig):
    _, Q = fig
    assert graded_hom_dim(Q, "567", "124", 0) == 1
    assert graded_hom_dim(Q, "567", "124", 3) == 4
    with pytest.raises(InvalidInput):
        graded_hom_dim(Q, "567", "124", -1)


def test_central_element(fig):
    _, Q = fig
    assert central_element_check(Q).ok
    k1 = gamma_of_collection(Collection(1, 3, tuple(frozenset({i}) for i in range(1, 4))))
    assert central_element_check(k1).ok
    v = "145"
    loops = [make_path(Q, Q.face_loop(f, v), v) for f in Q.faces_at(v)]
    assert normalize(Q, loops[0].then(loops[1])) == NormalForm(v, v, 2)


def test_boundary_generators_on_figure(fig):
    _, Q = fig
    ys, xs = boundary_generators(Q)
    # the y-generator out of 567 and the x-generator back into it
    j = next(j for j in ys if Q.boundary_vertex(j) == "567")
    y = ys[j]
    assert ["567"] + [Q.arrows[a].head for a in y.arrows] == ["567", "156", "157", "167"]
    assert path_weight(Q, y) == W7(5, 6, 7)
    x = xs[j]
    assert [Q.arrows[a].tail for a in x.arrows] + [x.target] == ["167", "567"]
    assert path_weight(Q, x) == W7(1, 2, 3, 4)
    assert normalize(Q, y.then(x)) == NormalForm("567", "567", 1)


def test_boundary_algebra_sweep(swept):
    for C, Q in swept:
        rep = boundary_algebra(Q, max_grade=5 if C.n <= 6 else 2)
        assert rep.ok, rep.violations[:3]


def test_normal_form_composition_is_consistent(swept):
    for C, Q in swept[:8]:
        vs = sorted(Q.vertices)
        for u in vs:
            for v in vs:
                for w in vs:
                    a = normalize(Q, minimal_path(Q, u, v))
                    b = normalize(Q, minimal_path(Q, v, w))
                    direct = normalize(Q, minimal_path(Q, u, v).then(minimal_path(Q, v, w)))
                    assert compose_normal_forms(Q, a, b) == direct


@given(st.integers(0, 10_000), st.integers(1, 12))
def test_random_walk_normal_form_matches_weight(seed, length):
    """Residual weight of any path is a nonnegative multiple of C_0."""
    C = enumerate_maximal_collections(3, 6)[seed % 34]
    Q = gamma_of_collection(C)
    rng = random.Random(seed)
    v = rng.choice(sorted(Q.vertices))
    arrows = []
    for _ in range(length):
        outs = Q.out_arrows(v)
        if not outs:
            break
        a = rng.choice(sorted(outs))
        arrows.append(a)
        v = Q.arrows[a].head
    if not arrows:
        return
    p = make_path(Q, arrows)
    nf = normalize(Q, p)
    assert path_weight(Q, p) == deg_min(Q.label(p.source), Q.label(p.target), 6) + full_weight(6).scale(nf.N)
    loop = face_loop_path(Q, p.target)
    assert normalize(Q, p.then(loop)).N == nf.N + 1
