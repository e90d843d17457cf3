"""Quivers with faces, the dimer axioms, the clique construction from a
collection, zig-zag strands, weights, perfect matchings and plabic duals."""
from __future__ import annotations

import itertools
import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .collection import (
    Collection,
    boundary_labels,
    is_maximal,
    label_str,
    pairwise_separated,
    parse_label,
    sort_key,
)
from .cyclic import Weight, full_weight, interval_vertices, weight_sum, reduce_index
from .errors import InvalidInput, TheoremViolation

PLUS = 1
MINUS = -1


@dataclass(frozen=True)
class Vertex:
    id: str
    label: frozenset | None = None
    is_boundary: bool = False


@dataclass(frozen=True)
class Arrow:
    id: int
    tail: str
    head: str
    is_boundary: bool = False


@dataclass(frozen=True)
class Face:
    id: int
    sign: int
    arrows: tuple[int, ...]


class QuiverWithFaces:
    """Vertices, arrows and signed faces; treated as immutable once built."""

    def __init__(self, vertices: Iterable[Vertex], arrows: Iterable[Arrow], faces: Iterable[Face],
                 k: int | None = None, n: int | None = None):
        self.vertices: dict[str, Vertex] = {v.id: v for v in vertices}
        self.arrows: dict[int, Arrow] = {a.id: a for a in arrows}
        self.faces: dict[int, Face] = {f.id: f for f in faces}
        self.k = k
        self.n = n
        self._faces_of: dict[int, list[tuple[int, int]]] | None = None

    @classmethod
    def assemble(cls, vertices: Iterable[Vertex], arrows: Iterable[tuple[int, str, str]],
                 faces: Iterable[Face], k: int | None = None, n: int | None = None,
                 boundary_vertices: Iterable[str] | None = None) -> "QuiverWithFaces":
        """Build a quiver, deriving boundary flags from face multiplicity."""
        faces = list(faces)
        mult: dict[int, int] = defaultdict(int)
        for f in faces:
            for a in f.arrows:
                mult[a] += 1
        arrow_objs = [Arrow(aid, t, h, mult[aid] == 1) for aid, t, h in arrows]
        on_boundary = {x for a in arrow_objs if a.is_boundary for x in (a.tail, a.head)}
        if boundary_vertices is not None:
            on_boundary = set(boundary_vertices)
        verts = [Vertex(v.id, v.label, v.id in on_boundary) for v in vertices]
        return cls(verts, arrow_objs, faces, k, n)

    # -- indices -------------------------------------------------------

    @property
    def faces_of(self) -> dict[int, list[tuple[int, int]]]:
        """arrow id -> list of (face id, position in face)."""
        if self._faces_of is None:
            idx: dict[int, list[tuple[int, int]]] = defaultdict(list)
            for f in self.faces.values():
                for pos, a in enumerate(f.arrows):
                    idx[a].append((f.id, pos))
            self._faces_of = dict(idx)
        return self._faces_of

    def face_of_sign(self, arrow: int, sign: int) -> tuple[int, int] | None:
        for fid, pos in self.faces_of.get(arrow, []):
            if self.faces[fid].sign == sign:
                return fid, pos
        return None

    def next_in_face(self, fid: int, pos: int) -> tuple[int, int]:
        f = self.faces[fid]
        p = (pos + 1) % len(f.arrows)
        return f.arrows[p], p

    def return_path(self, arrow: int, sign: int) -> tuple[int, ...]:
        """p_alpha^sign: the rest of the face of that sign, from head to tail."""
        hit = self.face_of_sign(arrow, sign)
        if hit is None:
            raise InvalidInput(f"arrow {arrow} lies in no face of sign {sign:+d}")
        fid, pos = hit
        arrs = self.faces[fid].arrows
        return tuple(arrs[(pos + t) % len(arrs)] for t in range(1, len(arrs)))

    def out_arrows(self, v: str) -> list[int]:
        return [a.id for a in self.arrows.values() if a.tail == v]

    def in_arrows(self, v: str) -> list[int]:
        return [a.id for a in self.arrows.values() if a.head == v]

    def label(self, v: str) -> frozenset:
        if v not in self.vertices:
            raise InvalidInput(f"unknown vertex {v}")
        lab = self.vertices[v].label
        if lab is None:
            raise InvalidInput(f"vertex {v} carries no label")
        return lab

    def vertex_of_label(self, I) -> str:
        I = frozenset(I)
        for v in self.vertices.values():
            if v.label == I:
                return v.id
        raise InvalidInput(f"no vertex labelled {sorted(I)}")

    def boundary_vertex(self, j: int) -> str:
        """Vertex carrying E_j."""
        if self.k is None or self.n is None:
            raise InvalidInput("boundary labels need a labelled quiver")
        return self.vertex_of_label(boundary_labels(self.k, self.n)[j - 1])

    def face_loop(self, fid: int, at: str) -> tuple[int, ...]:
        """Boundary of a face read as a cycle starting and ending at vertex `at`."""
        arrs = self.faces[fid].arrows
        for t, a in enumerate(arrs):
            if self.arrows[a].tail == at:
                return tuple(arrs[t:] + arrs[:t])
        raise InvalidInput(f"face {fid} does not pass through {at}")

    def faces_at(self, v: str) -> list[int]:
        return [f.id for f in self.faces.values() if any(self.arrows[a].tail == v for a in f.arrows)]

    # -- comparison and serialisation -----------------------------------

    def arrow_multiset(self, rename: Mapping[str, str] | None = None) -> list[tuple[str, str, bool]]:
        r = rename or {}
        return sorted((r.get(a.tail, a.tail), r.get(a.head, a.head), a.is_boundary) for a in self.arrows.values())

    def face_signature(self, rename: Mapping[str, str] | None = None) -> list[tuple[int, tuple[str, ...]]]:
        """Faces as signed cyclic vertex sequences, each rotated to its least form."""
        r = rename or {}
        out = []
        for f in self.faces.values():
            cyc = [r.get(self.arrows[a].tail, self.arrows[a].tail) for a in f.arrows]
            rots = [tuple(cyc[t:] + cyc[:t]) for t in range(len(cyc))]
            out.append((f.sign, min(rots)))
        return sorted(out)

    def same_as(self, other: "QuiverWithFaces", rename: Mapping[str, str] | None = None) -> bool:
        return (self.arrow_multiset(rename) == other.arrow_multiset()
                and self.face_signature(rename) == other.face_signature())

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "vertices": [{"id": v.id, "label": sorted(v.label) if v.label is not None else None,
                          "is_boundary": v.is_boundary} for v in self.vertices.values()],
            "arrows": [{"id": a.id, "tail": a.tail, "head": a.head, "is_boundary": a.is_boundary}
                       for a in self.arrows.values()],
            "faces": [{"id": f.id, "sign": "+" if f.sign == PLUS else "-", "boundary": list(f.arrows)}
                      for f in self.faces.values()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, data: dict) -> "QuiverWithFaces":
        try:
            verts = [Vertex(str(v["id"]), frozenset(v["label"]) if v.get("label") is not None else None,
                            bool(v.get("is_boundary", False))) for v in data["vertices"]]
            arrows = [Arrow(int(a["id"]), str(a["tail"]), str(a["head"]), bool(a.get("is_boundary", False)))
                      for a in data["arrows"]]
            faces = []
            for t, f in enumerate(data["faces"]):
                sign = f["sign"]
                sign = PLUS if sign in ("+", 1, "1") else MINUS if sign in ("-", -1, "-1") else None
                if sign is None:
                    raise InvalidInput(f"bad face sign {f['sign']!r}")
                faces.append(Face(int(f.get("id", t)), sign, tuple(int(a) for a in f["boundary"])))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidInput):
                raise
            raise InvalidInput(f"malformed quiver JSON: {exc}") from exc
        return cls(verts, arrows, faces, data.get("k"), data.get("n"))

    @classmethod
    def from_json(cls, text: str) -> "QuiverWithFaces":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"malformed quiver JSON: {exc}") from exc

    def __repr__(self) -> str:
        return f"QuiverWithFaces({len(self.vertices)} vertices, {len(self.arrows)} arrows, {len(self.faces)} faces)"


# -- construction from a collection ---------------------------------------

def white_cliques(C: Collection) -> dict[frozenset, list[frozenset]]:
    """K -> members K+a ordered by a increasing (a cyclic order)."""
    groups: dict[frozenset, list[tuple[int, frozenset]]] = defaultdict(list)
    for I in C.members:
        for a in I:
            groups[I - {a}].append((a, I))
    return {K: [I for _, I in sorted(v)] for K, v in groups.items()}


def black_cliques(C: Collection) -> dict[frozenset, list[frozenset]]:
    """L -> members L-b ordered by b decreasing."""
    groups: dict[frozenset, list[tuple[int, frozenset]]] = defaultdict(list)
    for I in C.members:
        for b in range(1, C.n + 1):
            if b not in I:
                groups[I | {b}].append((b, I))
    return {L: [I for _, I in sorted(v, reverse=True)] for L, v in groups.items()}


def gamma_of_collection(C: Collection, check: bool = True) -> QuiverWithFaces:
    """The quiver with faces whose faces are the nontrivial white and black cliques."""
    bad = pairwise_separated(C.members)
    if bad is not None:
        raise InvalidInput(f"labels {label_str(bad[0], C.n)} and {label_str(bad[1], C.n)} are not weakly separated")
    n = C.n
    bset = set(C.boundary)
    vid = {I: label_str(I, n) for I in C.members}
    verts = [Vertex(vid[I], I, I in bset) for I in C.members]
    cliques = [(MINUS, K, ms) for K, ms in white_cliques(C).items() if len(ms) >= 3]
    cliques += [(PLUS, L, ms) for L, ms in black_cliques(C).items() if len(ms) >= 3]
    cliques.sort(key=lambda c: (-c[0], len(c[1]), sort_key(c[1])))
    arrow_id: dict[tuple[str, str], int] = {}
    arrows: list[tuple[int, str, str]] = []
    faces: list[Face] = []
    for sign, _, ms in cliques:
        ids = []
        for t in range(len(ms)):
            key = (vid[ms[t]], vid[ms[(t + 1) % len(ms)]])
            if key not in arrow_id:
                arrow_id[key] = len(arrows)
                arrows.append((len(arrows), key[0], key[1]))
            ids.append(arrow_id[key])
        faces.append(Face(len(faces), sign, tuple(ids)))
    Q = QuiverWithFaces.assemble(verts, arrows, faces, C.k, n, boundary_vertices=[vid[I] for I in C.members if I in bset])
    if check:
        report = check_dimer_axioms(Q)
        if not report.ok:
            hint = "" if is_maximal(C) else " (collection is not maximal)"
            raise InvalidInput("clique construction violates the dimer axioms" + hint + ": " + "; ".join(report.violations[:5]))
    return Q


def collection_of(Q: QuiverWithFaces) -> Collection:
    if Q.k is None or Q.n is None:
        raise InvalidInput("quiver carries no (k, n)")
    return Collection(Q.k, Q.n, tuple(Q.label(v) for v in Q.vertices))


# -- axioms ---------------------------------------------------------------

@dataclass
class Report:
    name: str
    violations: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def fail(self, msg: str) -> None:
        self.violations.append(msg)


def _incidence(Q: QuiverWithFaces) -> dict[str, dict[tuple[int, str], list[tuple[int, str]]]]:
    """Per vertex: half-edge -> neighbouring half-edges via face corners."""
    graph: dict[str, dict[tuple[int, str], list[tuple[int, str]]]] = {v: {} for v in Q.vertices}
    for a in Q.arrows.values():
        if a.tail in graph:
            graph[a.tail].setdefault((a.id, "out"), [])
        if a.head in graph:
            graph[a.head].setdefault((a.id, "in"), [])
    for f in Q.faces.values():
        m = len(f.arrows)
        for t in range(m):
            a, b = Q.arrows.get(f.arrows[t]), Q.arrows.get(f.arrows[(t + 1) % m])
            if a is None or b is None or a.head != b.tail or a.head not in graph:
                continue
            g = graph[a.head]
            g.setdefault((a.id, "in"), []).append((b.id, "out"))
            g.setdefault((b.id, "out"), []).append((a.id, "in"))
    return graph


def check_dimer_axioms(Q: QuiverWithFaces, allow_boundary_loops: bool = False) -> Report:
    rep = Report("dimer axioms")
    for f in Q.faces.values():
        if f.sign not in (PLUS, MINUS):
            rep.fail(f"face {f.id}: sign {f.sign!r} is not +/-")
        if len(f.arrows) < 2:
            rep.fail(f"face {f.id}: boundary has fewer than two arrows")
        for t, a in enumerate(f.arrows):
            if a not in Q.arrows:
                rep.fail(f"face {f.id}: unknown arrow {a}")
                continue
            b = f.arrows[(t + 1) % len(f.arrows)]
            if b in Q.arrows and Q.arrows[a].head != Q.arrows[b].tail:
                rep.fail(f"face {f.id}: arrows {a} and {b} do not compose")
    for a in Q.arrows.values():
        if a.tail not in Q.vertices or a.head not in Q.vertices:
            rep.fail(f"arrow {a.id}: endpoint not a vertex")
        mult = len(Q.faces_of.get(a.id, []))
        if a.tail == a.head and not (allow_boundary_loops and mult == 1):
            rep.fail(f"(a) arrow {a.id} is a loop at {a.tail}")
        if mult not in (1, 2):
            rep.fail(f"(b) arrow {a.id} {a.tail}->{a.head} has face multiplicity {mult}")
        elif a.is_boundary != (mult == 1):
            rep.fail(f"(b) arrow {a.id} boundary flag disagrees with multiplicity {mult}")
        if mult == 2:
            signs = sorted(Q.faces[fid].sign for fid, _ in Q.faces_of[a.id])
            if signs != [MINUS, PLUS]:
                rep.fail(f"(c) internal arrow {a.id} {a.tail}->{a.head} lies in faces of signs {signs}")
    for v, g in _incidence(Q).items():
        if not g:
            rep.fail(f"(d) vertex {v} has no arrows")
            continue
        degs = {h: len(nb) for h, nb in g.items()}
        if any(d > 2 for d in degs.values()):
            rep.fail(f"(d) vertex {v}: incidence graph has a branch point")
            continue
        seen = {next(iter(g))}
        stack = list(seen)
        while stack:
            h = stack.pop()
            for nb in g[h]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        if len(seen) != len(g):
            rep.fail(f"(d) vertex {v}: incidence graph is disconnected")
            continue
        ends = sum(1 for d in degs.values() if d < 2)
        is_cycle = ends == 0
        if Q.vertices[v].is_boundary and is_cycle:
            rep.fail(f"(d) boundary vertex {v}: incidence graph is a cycle")
        if not Q.vertices[v].is_boundary and not is_cycle:
            rep.fail(f"(d) internal vertex {v}: incidence graph is a line")
        if not is_cycle and ends != 2 and len(g) > 1:
            rep.fail(f"(d) vertex {v}: incidence graph is not a line")
    return rep


# -- rotation order -------------------------------------------------------

def _rotation_successor(Q: QuiverWithFaces, v: str) -> dict[tuple[int, str], tuple[int, str]]:
    """Anticlockwise successor of each half-edge at v.

    In a + face the corner (alpha in, beta out) is passed anticlockwise from
    beta to alpha; in a - face from alpha to beta.
    """
    succ: dict[tuple[int, str], tuple[int, str]] = {}
    for f in Q.faces.values():
        m = len(f.arrows)
        for t in range(m):
            a, b = Q.arrows[f.arrows[t]], Q.arrows[f.arrows[(t + 1) % m]]
            if a.head != v:
                continue
            if f.sign == PLUS:
                succ[(b.id, "out")] = (a.id, "in")
            else:
                succ[(a.id, "in")] = (b.id, "out")
    return succ


@dataclass(frozen=True)
class VertexStar:
    vertex: str
    half_edges: tuple[tuple[int, str], ...]  # anticlockwise
    is_boundary: bool
    w_out: tuple[int, ...] = ()
    w_in: tuple[int, ...] = ()
    r_out: int = 0
    r_in: int = 0

    @property
    def arrows(self) -> tuple[int, ...]:
        return tuple(a for a, _ in self.half_edges)


def vertex_star(Q: QuiverWithFaces, v: str) -> VertexStar:
    succ = _rotation_successor(Q, v)
    halves = [(a.id, "out") for a in Q.arrows.values() if a.tail == v]
    halves += [(a.id, "in") for a in Q.arrows.values() if a.head == v]
    if not halves:
        raise TheoremViolation(f"vertex {v} has no arrows")
    preds = set(succ.values())
    starts = sorted(h for h in halves if h not in preds)
    if len(starts) > 1:
        raise TheoremViolation(f"rotation at {v} is not a single line or cycle")
    start = starts[0] if starts else min(h for h in halves if h[1] == "out")
    order = [start]
    while order[-1] in succ and succ[order[-1]] != start:
        order.append(succ[order[-1]])
        if len(order) > len(halves):
            raise TheoremViolation(f"rotation at {v} does not close up")
    if len(order) != len(halves):
        raise TheoremViolation(f"rotation at {v} is not a single line or cycle")
    line = bool(starts)
    if not line:
        return VertexStar(v, tuple(order), False)
    w_out = list(order)
    while w_out and w_out[0][1] == "in":
        w_out.pop(0)
    while w_out and w_out[-1][1] == "in":
        w_out.pop()
    w_in = list(order)
    while w_in and w_in[0][1] == "out":
        w_in.pop(0)
    while w_in and w_in[-1][1] == "out":
        w_in.pop()
    return VertexStar(v, tuple(order), True,
                      tuple(a for a, _ in w_out), tuple(a for a, _ in w_in),
                      sum(1 for _, d in w_out if d == "out"), sum(1 for _, d in w_in if d == "in"))


# -- weights --------------------------------------------------------------

def label_change(Q: QuiverWithFaces, arrow: int) -> tuple[int, int]:
    """(c, d) with tail - head = {c} and head - tail = {d}."""
    a = Q.arrows[arrow]
    I, J = Q.label(a.tail), Q.label(a.head)
    out, inn = I - J, J - I
    if len(out) != 1 or len(inn) != 1:
        raise InvalidInput(f"labels of arrow {a.tail}->{a.head} do not differ in exactly one element")
    return next(iter(out)), next(iter(inn))


def arrow_weight(Q: QuiverWithFaces, arrow: int) -> Weight:
    c, d = label_change(Q, arrow)
    return interval_vertices(c, d, Q.n)


def arrow_weights(Q: QuiverWithFaces) -> dict[int, Weight]:
    return {a: arrow_weight(Q, a) for a in Q.arrows}


def face_weight(Q: QuiverWithFaces, fid: int, weights: Mapping[int, Weight] | None = None) -> Weight:
    w = weights or {}
    total = weight_sum((w[a] if a in w else arrow_weight(Q, a) for a in Q.faces[fid].arrows), Q.n)
    if total != full_weight(Q.n):
        raise TheoremViolation(f"face {fid} has weight {total}, expected C_0")
    return total


@dataclass(frozen=True)
class PerfectMatching:
    vertex: int
    arrows: frozenset


def perfect_matching(Q: QuiverWithFaces, i: int, weights: Mapping[int, Weight] | None = None) -> PerfectMatching:
    w = weights or arrow_weights(Q)
    return PerfectMatching(i, frozenset(a for a in Q.arrows if w[a][i] > 0))


@dataclass
class WeightSumReport:
    vertex: str
    kind: str  # internal | out | in
    computed: Weight
    expected: Weight

    @property
    def ok(self) -> bool:
        return self.computed == self.expected


def vertex_weight_sums(Q: QuiverWithFaces, v: str, weights: Mapping[int, Weight] | None = None) -> list[WeightSumReport]:
    w = weights or arrow_weights(Q)
    n = Q.n
    C0 = full_weight(n)
    star = vertex_star(Q, v)
    if not star.is_boundary:
        r = len(star.half_edges) // 2
        total = weight_sum((w[a] for a in star.arrows), n)
        return [WeightSumReport(v, "internal", total, C0.scale(r - 1))]
    if len(star.w_out) == len(star.w_in) == len(star.half_edges):
        raise InvalidInput(f"out and in wedges at {v} are both the whole star")
    j = _boundary_index(Q, v)
    e = lambda i: Weight.from_support([reduce_index(i, n)], n)
    out = weight_sum((w[a] for a in star.w_out), n)
    inn = weight_sum((w[a] for a in star.w_in), n)
    return [WeightSumReport(v, "out", out, C0.scale(star.r_out - 1) + e(j)),
            WeightSumReport(v, "in", inn, C0.scale(star.r_in - 1) + e(j - Q.k))]


def _boundary_index(Q: QuiverWithFaces, v: str) -> int:
    lab = Q.label(v)
    for j, E in enumerate(boundary_labels(Q.k, Q.n), start=1):
        if E == lab:
            return j
    raise InvalidInput(f"{v} is not a boundary label")


# -- boundary components and strands ---------------------------------------

def x_direction(Q: QuiverWithFaces, arrow: int) -> tuple[str, str]:
    """Endpoints of a boundary arrow ordered so the surface is on the right.

    Arrows of - faces already run this way; arrows of + faces run against it.
    """
    a = Q.arrows[arrow]
    (fid, _), = Q.faces_of[arrow]
    return (a.tail, a.head) if Q.faces[fid].sign == MINUS else (a.head, a.tail)


def boundary_cycles(Q: QuiverWithFaces) -> list[list[int]]:
    """Boundary arrows grouped into components, each listed in x-direction."""
    bnd = sorted(a.id for a in Q.arrows.values() if a.is_boundary)
    start_at: dict[str, list[int]] = defaultdict(list)
    for a in bnd:
        start_at[x_direction(Q, a)[0]].append(a)
    for v, lst in start_at.items():
        if len(lst) != 1:
            raise TheoremViolation(f"boundary vertex {v} starts {len(lst)} boundary steps")
    used: set[int] = set()
    cycles = []
    for a in bnd:
        if a in used:
            continue
        cyc = [a]
        used.add(a)
        while True:
            nxt = start_at[x_direction(Q, cyc[-1])[1]][0]
            if nxt == a:
                break
            if nxt in used:
                raise TheoremViolation("boundary arrows do not form disjoint cycles")
            cyc.append(nxt)
            used.add(nxt)
        cycles.append(cyc)
    return cycles


def boundary_marker(Q: QuiverWithFaces, arrow: int) -> int:
    """j such that the boundary arrow joins E_{j-1} and E_j."""
    a = Q.arrows[arrow]
    ends = {Q.label(a.tail), Q.label(a.head)}
    E = boundary_labels(Q.k, Q.n)
    for j in range(1, Q.n + 1):
        if ends == {E[j - 1], E[j - 2]}:
            return j
    raise InvalidInput(f"arrow {a.tail}->{a.head} does not join consecutive boundary labels")


@dataclass(frozen=True)
class Strand:
    start_marker: int
    end_marker: int
    crossings: tuple[int, ...]
    faces: tuple[int, ...]  # face entered after each crossing; last is exited
    left: tuple[str, ...]  # endpoint of each crossed arrow lying on the strand's left
    number: int | None = None


def _trace(Q: QuiverWithFaces, arrow: int, fid: int, pos: int) -> tuple[list[int], list[int], list[str]]:
    crossings, faces, left = [], [], []
    a, f, p = arrow, fid, pos
    limit = 2 * len(Q.arrows) + 2
    while True:
        arr = Q.arrows[a]
        crossings.append(a)
        faces.append(f)
        left.append(arr.tail if Q.faces[f].sign == PLUS else arr.head)
        nxt, _ = Q.next_in_face(f, p)
        others = [(g, q) for g, q in Q.faces_of[nxt] if (g, q) != (f, (p + 1) % len(Q.faces[f].arrows))]
        if not others:
            nar = Q.arrows[nxt]
            crossings.append(nxt)
            faces.append(f)
            left.append(nar.head if Q.faces[f].sign == PLUS else nar.tail)
            return crossings, faces, left
        (g, q), = others
        a, f, p = nxt, g, q
        if len(crossings) > limit:
            raise TheoremViolation("zig-zag path does not terminate")


def strands(Q: QuiverWithFaces, markers: Mapping[int, int] | None = None) -> list[Strand]:
    """Zig-zag paths from boundary arrow to boundary arrow.

    Markers come from labels when the quiver is labelled, else from `markers`
    (boundary arrow -> number), else from the position of the boundary arrow
    along its component (1-based, x-direction).
    """
    labelled = Q.k is not None and Q.n is not None and all(v.label is not None for v in Q.vertices.values())
    position: dict[int, int] = {}
    for cyc in boundary_cycles(Q):
        for t, a in enumerate(cyc, start=1):
            position[a] = markers[a] if markers is not None else t
    out = []
    covered: set[tuple[int, int]] = set()
    for a in sorted(position):
        (fid, pos), = Q.faces_of[a]
        cr, fs, left = _trace(Q, a, fid, pos)
        for t in range(len(cr) - 1):
            covered.add((fs[t], cr[t]))
        number = None
        if labelled:
            nums = set()
            for x, y in zip(cr, left):
                c, d = label_change(Q, x)
                nums.add(c if y == Q.arrows[x].tail else d)
            if len(nums) != 1:
                raise TheoremViolation(f"zig-zag path from arrow {a} changes strand label {sorted(nums)}")
            number = nums.pop()
            s_mark, e_mark = boundary_marker(Q, cr[0]), boundary_marker(Q, cr[-1])
        else:
            s_mark, e_mark = position[cr[0]], position[cr[-1]]
        out.append(Strand(s_mark, e_mark, tuple(cr), tuple(fs), tuple(left), number))
    closed = [(f, a) for f in Q.faces for a in Q.faces[f].arrows if (f, a) not in covered]
    if closed:
        raise TheoremViolation(f"{len(closed)} face corners lie on closed zig-zag paths")
    return sorted(out, key=lambda s: (s.start_marker, s.crossings))


def check_postnikov_axioms(sts: Sequence[Strand], Q: QuiverWithFaces | None = None, k: int | None = None,
                           n: int | None = None) -> Report:
    rep = Report("strand axioms")
    for s in sts:
        if len(set(s.crossings)) != len(s.crossings):
            rep.fail(f"(b1) strand from marker {s.start_marker} crosses an arrow twice")
        inner_faces = s.faces[:-1]
        if len(set(inner_faces)) != len(inner_faces):
            rep.fail(f"(b1) strand from marker {s.start_marker} passes a face twice")
        if Q is not None:
            signs = [Q.faces[f].sign for f in inner_faces]
            if any(signs[t] == signs[t + 1] for t in range(len(signs) - 1)):
                rep.fail(f"(a3) strand from marker {s.start_marker} does not alternate")
    if Q is not None:
        count: dict[int, int] = defaultdict(int)
        for s in sts:
            for a in s.crossings:
                count[a] += 1
        for a in Q.arrows:
            if count[a] != 2:
                rep.fail(f"arrow {a} crossed by {count[a]} strands")
    for s, t in itertools.combinations(sts, 2):
        common = set(s.crossings) & set(t.crossings)
        if len(common) < 2:
            continue
        order_s = [a for a in s.crossings if a in common]
        order_t = [a for a in t.crossings if a in common]
        if order_s != order_t[::-1]:
            rep.fail(f"(b2) strands from markers {s.start_marker} and {t.start_marker} cross in the same order")
    if k is not None and n is not None:
        for s in sts:
            if reduce_index(s.start_marker + k, n) != s.end_marker:
                rep.fail(f"strand from marker {s.start_marker} ends at {s.end_marker}, expected +{k}")
            if s.number is not None and s.number != s.start_marker:
                rep.fail(f"strand {s.number} starts at marker {s.start_marker}")
    return rep


def strand_left_sets(Q: QuiverWithFaces, sts: Sequence[Strand]) -> dict[str, frozenset]:
    """For each vertex, the set of strand markers having it on their left.

    The left side of each strand is flood-filled through arrows it does not cross.
    """
    adj: dict[str, list[tuple[int, str]]] = defaultdict(list)
    for a in Q.arrows.values():
        adj[a.tail].append((a.id, a.head))
        adj[a.head].append((a.id, a.tail))
    labels: dict[str, set] = {v: set() for v in Q.vertices}
    for s in sts:
        crossed = set(s.crossings)
        right = set()
        for x, y in zip(s.crossings, s.left):
            arr = Q.arrows[x]
            right.add(arr.head if y == arr.tail else arr.tail)
        seen = set(s.left)
        stack = list(seen)
        while stack:
            v = stack.pop()
            for aid, w in adj[v]:
                if aid not in crossed and w not in seen:
                    seen.add(w)
                    stack.append(w)
        if seen & right:
            raise TheoremViolation(f"strand from marker {s.start_marker} does not separate the surface")
        for v in seen:
            labels[v].add(s.start_marker)
    return {v: frozenset(l) for v, l in labels.items()}


# -- plabic dual ----------------------------------------------------------

@dataclass(frozen=True)
class PlabicEdge:
    id: int
    black: str | None  # node id, None for a boundary half-edge
    white: str | None
    tail_region: str
    head_region: str


@dataclass(frozen=True)
class PlabicGraph:
    nodes: dict  # node id -> "black" | "white"
    rotation: dict  # node id -> tuple of edge ids (face boundary order)
    edges: tuple[PlabicEdge, ...]
    regions: tuple[Vertex, ...]
    k: int | None = None
    n: int | None = None

    def is_bipartite(self) -> bool:
        return all(e.black is None or self.nodes[e.black] == "black" for e in self.edges) and \
            all(e.white is None or self.nodes[e.white] == "white" for e in self.edges)

    def degrees(self) -> dict[str, int]:
        return {u: len(r) for u, r in self.rotation.items()}


def plabic_dual(Q: QuiverWithFaces) -> PlabicGraph:
    """One node per face (+ black, - white), one edge per arrow."""
    nodes = {f"f{f.id}": ("black" if f.sign == PLUS else "white") for f in Q.faces.values()}
    rotation = {f"f{f.id}": f.arrows for f in Q.faces.values()}
    edges = []
    for a in Q.arrows.values():
        black = white = None
        for fid, _ in Q.faces_of[a.id]:
            if Q.faces[fid].sign == PLUS:
                black = f"f{fid}"
            else:
                white = f"f{fid}"
        edges.append(PlabicEdge(a.id, black, white, a.tail, a.head))
    return PlabicGraph(nodes, rotation, tuple(edges), tuple(Q.vertices.values()), Q.k, Q.n)


def quiver_from_plabic(G: PlabicGraph) -> QuiverWithFaces:
    arrows = [(e.id, e.tail_region, e.head_region) for e in G.edges]
    faces = [Face(int(u[1:]), PLUS if c == "black" else MINUS, tuple(G.rotation[u])) for u, c in G.nodes.items()]
    faces.sort(key=lambda f: f.id)
    return QuiverWithFaces.assemble(G.regions, arrows, faces, G.k, G.n,
                                    boundary_vertices=[v.id for v in G.regions if v.is_boundary])


# -- full diagnostic sweep --------------------------------------------------

def labelled_checks(Q: QuiverWithFaces) -> list[Report]:
    """Every exact identity expected of a quiver built from a maximal collection."""
    reports = [check_dimer_axioms(Q)]
    sts = strands(Q)
    st = check_postnikov_axioms(sts, Q, Q.k, Q.n)
    if len(sts) != Q.n:
        st.fail(f"{len(sts)} strands, expected {Q.n}")
    reports.append(st)
    w = arrow_weights(Q)
    C0 = full_weight(Q.n)
    wr = Report("weights")
    for a, wa in w.items():
        if wa.is_zero() or wa == C0:
            wr.fail(f"arrow {a} has trivial weight {wa}")
    for fid in Q.faces:
        total = weight_sum((w[a] for a in Q.faces[fid].arrows), Q.n)
        if total != C0:
            wr.fail(f"face {fid} has weight {total}")
    reports.append(wr)
    pm = Report("perfect matchings")
    for i in range(1, Q.n + 1):
        P = perfect_matching(Q, i, w).arrows
        for f in Q.faces.values():
            hits = sum(1 for a in f.arrows if a in P)
            if hits != 1:
                pm.fail(f"P_{i} meets face {f.id} in {hits} arrows")
    reports.append(pm)
    vs = Report("vertex weight sums")
    for v in Q.vertices:
        for r in vertex_weight_sums(Q, v, w):
            if not r.ok:
                vs.fail(f"{r.kind} sum at {v}: {r.computed} != {r.expected}")
    reports.append(vs)
    return reports


def figure_collection() -> Collection:
    """The 13-label (3,7) collection used as the running example."""
    labels = ["567", "671", "712", "123", "234", "345", "456", "156", "157", "145", "147", "245", "124"]
    return Collection(3, 7, tuple(parse_label(l, 7) for l in labels))
