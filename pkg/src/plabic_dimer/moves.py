"""Geometric exchange at quadrilateral vertices, reduction of twisted
2-cycles, and invariance of the boundary algebra under exchange."""
from __future__ import annotations

import random
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import boundary_algebra
from .collection import Collection, is_maximal, label_str, sort_key
from .dimer import Face, QuiverWithFaces, check_dimer_axioms, gamma_of_collection, vertex_star
from .errors import InvalidInput, TheoremViolation


@dataclass(frozen=True)
class ExchangeableVertex:
    vertex: str
    half_edges: tuple[tuple[int, str], ...]  # anticlockwise, alternating in/out
    neighbours: tuple[str, ...]


def exchangeable_vertex(Q: QuiverWithFaces, v: str) -> ExchangeableVertex:
    if v not in Q.vertices:
        raise InvalidInput(f"unknown vertex {v}")
    if Q.vertices[v].is_boundary:
        raise InvalidInput(f"{v} is a boundary vertex")
    star = vertex_star(Q, v)
    if len(star.half_edges) != 4:
        raise InvalidInput(f"{v} has {len(star.half_edges)} incident arrows, not 4")
    nbrs = []
    for a, d in star.half_edges:
        arr = Q.arrows[a]
        nbrs.append(arr.head if d == "out" else arr.tail)
    return ExchangeableVertex(v, star.half_edges, tuple(nbrs))


def exchangeable_vertices(Q: QuiverWithFaces) -> list[str]:
    out = []
    for v in sorted(Q.vertices):
        try:
            exchangeable_vertex(Q, v)
        except InvalidInput:
            continue
        out.append(v)
    return out


def exchanged_label(Q: QuiverWithFaces, v: str) -> frozenset:
    """New label from the neighbours: the pairing of opposite sides that is not I."""
    ev = exchangeable_vertex(Q, v)
    N = [Q.label(u) for u in ev.neighbours]
    I = Q.label(v)
    first = (N[0] & N[1]) | (N[2] & N[3])
    second = (N[1] & N[2]) | (N[3] & N[0])
    if first == I and second != I:
        new = second
    elif second == I and first != I:
        new = first
    else:
        raise TheoremViolation(f"neighbour pairings at {v} do not recover its label exactly once")
    if len(new) != len(I):
        raise TheoremViolation(f"exchanged label at {v} has size {len(new)}")
    return new


def mutated_arrows(Q: QuiverWithFaces, v: str, new_id: str) -> list[tuple[str, str, bool]]:
    """Arrow multiset after composing through v, reversing at v and cancelling 2-cycles."""
    exchangeable_vertex(Q, v)
    ins = [a for a in Q.arrows.values() if a.head == v]
    outs = [a for a in Q.arrows.values() if a.tail == v]
    arrows: list[list] = []
    for a in Q.arrows.values():
        if a.tail == v or a.head == v:
            continue
        arrows.append([a.tail, a.head, a.is_boundary])
    for a in ins:
        for b in outs:
            arrows.append([a.tail, b.head, False])
    for a in ins:
        arrows.append([new_id, a.tail, False])
    for b in outs:
        arrows.append([b.head, new_id, False])
    arrows = _cancel(arrows, boundary=False)
    arrows = _cancel(arrows, boundary=True)
    return sorted((t, h, bd) for t, h, bd in arrows)


def _cancel(arrows: list[list], boundary: bool) -> list[list]:
    """Remove opposite pairs; with boundary=True the pair is (boundary, internal)
    and the internal arrow survives as a boundary arrow."""
    alive = list(arrows)
    changed = True
    while changed:
        changed = False
        for s in range(len(alive)):
            for t in range(len(alive)):
                x, y = alive[s], alive[t]
                if s == t or x[0] != y[1] or x[1] != y[0]:
                    continue
                if not boundary and not x[2] and not y[2]:
                    alive = [z for r, z in enumerate(alive) if r not in (s, t)]
                    changed = True
                elif boundary and x[2] and not y[2]:
                    y[2] = True
                    alive = [z for r, z in enumerate(alive) if r != s]
                    changed = True
                if changed:
                    break
            if changed:
                break
    return alive


def geometric_exchange(C: Collection, Q: QuiverWithFaces, v: str) -> tuple[Collection, QuiverWithFaces]:
    I = Q.label(v)
    new = exchanged_label(Q, v)
    if new in C:
        raise TheoremViolation(f"exchanged label {label_str(new, C.n)} already present")
    C2 = C.replace(I, new)
    if not is_maximal(C2):
        raise TheoremViolation(f"exchange at {v} leaves a non-maximal collection")
    Q2 = gamma_of_collection(C2)
    route_i = mutated_arrows(Q, v, label_str(new, C.n))
    route_ii = Q2.arrow_multiset()
    if route_i != route_ii:
        diff = (Counter(route_i) - Counter(route_ii)) + (Counter(route_ii) - Counter(route_i))
        raise TheoremViolation(f"mutation rules and clique construction disagree at {v}: {sorted(diff)[:4]}")
    return C2, Q2


# -- twisted 2-cycles -------------------------------------------------------

def _two_cycle_faces(Q: QuiverWithFaces) -> list[int]:
    out = []
    for f in Q.faces.values():
        if len(f.arrows) != 2:
            continue
        a, b = (Q.arrows[x] for x in f.arrows)
        if a.is_boundary and b.is_boundary:
            continue
        if not a.is_boundary and not b.is_boundary:
            others = {g for x in f.arrows for g, _ in Q.faces_of[x] if g != f.id}
            if len(others) != 2:
                continue
        out.append(f.id)
    return out


def _reduce_face(Q: QuiverWithFaces, fid: int) -> QuiverWithFaces:
    f = Q.faces[fid]
    a, b = (Q.arrows[x] for x in f.arrows)
    faces = dict(Q.faces)
    del faces[fid]
    arrows = {x.id: (x.id, x.tail, x.head) for x in Q.arrows.values()}
    if a.is_boundary or b.is_boundary:
        drop = a if a.is_boundary else b
        del arrows[drop.id]
    else:
        (f1, p1), = [(g, p) for g, p in Q.faces_of[a.id] if g != fid]
        (f3, p3), = [(g, p) for g, p in Q.faces_of[b.id] if g != fid]
        arr1, arr3 = Q.faces[f1].arrows, Q.faces[f3].arrows
        q = [arr1[(p1 + t) % len(arr1)] for t in range(1, len(arr1))]
        p = [arr3[(p3 + t) % len(arr3)] for t in range(1, len(arr3))]
        merged = Face(min(f1, f3), Q.faces[f1].sign, tuple(q + p))
        del faces[f1], faces[f3]
        faces[merged.id] = merged
        del arrows[a.id], arrows[b.id]
    used = {x for _, t, h in arrows.values() for x in (t, h)}
    verts = [v for v in Q.vertices.values() if v.id in used]
    return QuiverWithFaces.assemble(verts, list(arrows.values()), sorted(faces.values(), key=lambda g: g.id),
                                    Q.k, Q.n)


def reduce_twists(Q: QuiverWithFaces, rng: random.Random | None = None) -> QuiverWithFaces:
    """Cancel 2-cycle faces until none remain; rng picks the order (default: lowest id)."""
    while True:
        cands = _two_cycle_faces(Q)
        if not cands:
            return Q
        fid = rng.choice(cands) if rng is not None else cands[0]
        Q = _reduce_face(Q, fid)


def split_face(Q: QuiverWithFaces, fid: int, i: int, j: int) -> QuiverWithFaces:
    """Inverse of an internal reduction: cut face fid between the tails of its
    i-th and j-th arrows with a new 2-cycle face."""
    f = Q.faces[fid]
    m = len(f.arrows)
    if not (0 <= i < m and 0 <= j < m) or i == j:
        raise InvalidInput("need two distinct positions")
    u, w = Q.arrows[f.arrows[i]].tail, Q.arrows[f.arrows[j]].tail
    if u == w:
        raise InvalidInput("cut would create a loop")
    p = [f.arrows[(i + t) % m] for t in range((j - i) % m)]  # u -> w
    q = [f.arrows[(j + t) % m] for t in range((i - j) % m)]  # w -> u
    na, nb = max(Q.arrows) + 1, max(Q.arrows) + 2
    arrows = [(x.id, x.tail, x.head) for x in Q.arrows.values()] + [(na, u, w), (nb, w, u)]
    nf = max(Q.faces) + 1
    faces = [g for g in Q.faces.values() if g.id != fid]
    faces += [Face(fid, f.sign, tuple([na] + q)), Face(nf, f.sign, tuple([nb] + p)), Face(nf + 1, -f.sign, (na, nb))]
    return QuiverWithFaces.assemble(Q.vertices.values(), arrows, faces, Q.k, Q.n,
                                    boundary_vertices=[v.id for v in Q.vertices.values() if v.is_boundary])


def twist_boundary(Q: QuiverWithFaces, arrow: int) -> QuiverWithFaces:
    """Inverse of a boundary reduction: glue a 2-cycle face onto a boundary arrow."""
    a = Q.arrows[arrow]
    if not a.is_boundary:
        raise InvalidInput("twist needs a boundary arrow")
    (fid, _), = Q.faces_of[arrow]
    nb = max(Q.arrows) + 1
    arrows = [(x.id, x.tail, x.head) for x in Q.arrows.values()] + [(nb, a.head, a.tail)]
    faces = list(Q.faces.values()) + [Face(max(Q.faces) + 1, -Q.faces[fid].sign, (arrow, nb))]
    return QuiverWithFaces.assemble(Q.vertices.values(), arrows, faces, Q.k, Q.n,
                                    boundary_vertices=[v.id for v in Q.vertices.values() if v.is_boundary])


# -- invariance and exploration -----------------------------------------------

@dataclass
class InvarianceReport:
    steps: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def invariance_check(C: Collection, Q: QuiverWithFaces, sequence: Sequence[str]) -> InvarianceReport:
    """Exchange along `sequence` (labels as current at each step); the boundary
    table must never change."""
    rep = InvarianceReport()
    reference = boundary_algebra(Q, max_grade=None).signature()
    for step, label in enumerate(sequence):
        if label not in Q.vertices:
            raise InvalidInput(f"step {step}: no vertex {label}")
        try:
            C, Q = geometric_exchange(C, Q, label)
        except TheoremViolation as exc:
            rep.violations.append(f"step {step}: {exc}")
            return rep
        rep.steps += 1
        if not is_maximal(C):
            rep.violations.append(f"step {step}: collection not maximal")
        bnd = boundary_algebra(Q, max_grade=None)
        if not bnd.ok or bnd.signature() != reference:
            rep.violations.append(f"step {step}: boundary table changed at {label}")
    return rep


def random_sequence(C: Collection, Q: QuiverWithFaces, length: int, rng: random.Random) -> tuple[list[str], Collection, QuiverWithFaces]:
    seq = []
    for _ in range(length):
        cands = exchangeable_vertices(Q)
        if not cands:
            break
        v = rng.choice(cands)
        seq.append(v)
        C, Q = geometric_exchange(C, Q, v)
    return seq, C, Q


def exchange_graph(C: Collection, max_nodes: int = 1000) -> tuple[list[Collection], list[tuple[int, int]]]:
    """Breadth-first exploration of collections reachable by exchanges."""
    key = lambda c: tuple(sort_key(m) for m in c.members)
    index = {key(C): 0}
    nodes = [C]
    edges = set()
    queue = deque([C])
    while queue:
        cur = queue.popleft()
        Q = gamma_of_collection(cur)
        for v in exchangeable_vertices(Q):
            nxt, _ = geometric_exchange(cur, Q, v)
            kn = key(nxt)
            if kn not in index:
                if len(nodes) >= max_nodes:
                    continue
                index[kn] = len(nodes)
                nodes.append(nxt)
                queue.append(nxt)
            a, b = index[key(cur)], index[kn]
            edges.add((min(a, b), max(a, b)))
    return nodes, sorted(edges)
