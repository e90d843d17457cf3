"""Paths in a dimer quiver, normal forms u^N p_JI, the greedy minimal path,
a bounded rewriting oracle and the boundary algebra."""
from __future__ import annotations

import enum
import random
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .cmrank1 import b_normal_count, deg_min
from .collection import ab_pair, label_str, sort_key
from .cyclic import Weight, full_weight, open_interval, reduce_index, weight_sub_scalar, weight_sum
from .dimer import MINUS, PLUS, QuiverWithFaces, arrow_weights
from .errors import InvalidInput, TheoremViolation


@dataclass(frozen=True)
class QuiverPath:
    arrows: tuple[int, ...]
    source: str
    target: str

    def __len__(self) -> int:
        return len(self.arrows)

    def then(self, other: "QuiverPath") -> "QuiverPath":
        """This path followed by `other`."""
        if self.target != other.source:
            raise InvalidInput(f"cannot follow a path ending at {self.target} by one starting at {other.source}")
        return QuiverPath(self.arrows + other.arrows, self.source, other.target)


def make_path(Q: QuiverWithFaces, arrows: Sequence[int], source: str | None = None) -> QuiverPath:
    arrows = tuple(arrows)
    if not arrows:
        if source is None or source not in Q.vertices:
            raise InvalidInput("an empty path needs a valid source vertex")
        return QuiverPath((), source, source)
    for a in arrows:
        if a not in Q.arrows:
            raise InvalidInput(f"unknown arrow {a}")
    for a, b in zip(arrows, arrows[1:]):
        if Q.arrows[a].head != Q.arrows[b].tail:
            raise InvalidInput(f"arrows {a} and {b} do not compose")
    if source is not None and Q.arrows[arrows[0]].tail != source:
        raise InvalidInput(f"path does not start at {source}")
    return QuiverPath(arrows, Q.arrows[arrows[0]].tail, Q.arrows[arrows[-1]].head)


def path_from_vertices(Q: QuiverWithFaces, vertices: Sequence[str]) -> QuiverPath:
    """Path through the given vertex ids, using the lowest-numbered arrow at each step."""
    out = []
    for u, v in zip(vertices, vertices[1:]):
        cands = sorted(a.id for a in Q.arrows.values() if a.tail == u and a.head == v)
        if not cands:
            raise InvalidInput(f"no arrow {u}->{v}")
        out.append(cands[0])
    return make_path(Q, out, vertices[0])


@dataclass(frozen=True, order=True)
class NormalForm:
    """u^N p_JI, written (source I, target J, N)."""

    source: str
    target: str
    N: int


class _Cache:
    """Per-quiver weights and degrees; quivers are immutable so this is safe."""

    def __init__(self, Q: QuiverWithFaces):
        self.weights = arrow_weights(Q)
        self.deg: dict[tuple[str, str], Weight] = {}

    def degree(self, Q: QuiverWithFaces, u: str, v: str) -> Weight:
        key = (u, v)
        if key not in self.deg:
            self.deg[key] = deg_min(Q.label(u), Q.label(v), Q.n)
        return self.deg[key]


def _cache(Q: QuiverWithFaces) -> _Cache:
    c = getattr(Q, "_algebra_cache", None)
    if c is None:
        c = _Cache(Q)
        Q._algebra_cache = c
    return c


def path_weight(Q: QuiverWithFaces, p: QuiverPath) -> Weight:
    for a, b in zip(p.arrows, p.arrows[1:]):
        if Q.arrows[a].head != Q.arrows[b].tail:
            raise InvalidInput(f"arrows {a} and {b} do not compose")
    w = _cache(Q).weights
    return weight_sum((w[a] for a in p.arrows), Q.n)


def minimal_path(Q: QuiverWithFaces, I: str, J: str) -> QuiverPath:
    """Greedy insincere path from I to J.

    Each step takes an arrow whose weight avoids (a, b)_0 for the current pair;
    among those, the one leaving the least remaining degree, then the smallest
    head label.
    """
    cache = _cache(Q)
    n = Q.n
    target = Q.label(J)
    cur = I
    arrows: list[int] = []
    remaining = sum(cache.degree(Q, cur, J).counts)
    while cur != J:
        a, b = ab_pair(Q.label(cur), target, n)
        forbidden = set(open_interval(a, b, n))
        best = None
        for arr in Q.arrows.values():
            if arr.tail != cur or cache.weights[arr.id].support() & forbidden:
                continue
            rest = sum(cache.degree(Q, arr.head, J).counts)
            key = (rest, sort_key(Q.label(arr.head)), arr.id)
            if best is None or key < best[0]:
                best = (key, arr)
        if best is None:
            raise TheoremViolation(f"no legal arrow out of {cur} towards {J}")
        (rest, _, _), arr = best
        if rest >= remaining:
            raise TheoremViolation(f"legal arrow {arr.tail}->{arr.head} does not reduce the degree towards {J}")
        arrows.append(arr.id)
        cur, remaining = arr.head, rest
        if len(arrows) > len(Q.arrows) * n:
            raise TheoremViolation("greedy path does not terminate")
    path = QuiverPath(tuple(arrows), I, J)
    if path_weight(Q, path) != cache.degree(Q, I, J):
        raise TheoremViolation(f"minimal path {I}->{J} has weight {path_weight(Q, path)}, expected {cache.degree(Q, I, J)}")
    return path


def normalize(Q: QuiverWithFaces, p: QuiverPath) -> NormalForm:
    residual = path_weight(Q, p) - _cache(Q).degree(Q, p.source, p.target)
    base, N = weight_sub_scalar(residual)
    if not base.is_zero() or N < 0:
        raise TheoremViolation(f"path {p.source}->{p.target} has residual weight {residual}, not a multiple of C_0")
    return NormalForm(p.source, p.target, N)


def compose_normal_forms(Q: QuiverWithFaces, first: NormalForm, second: NormalForm) -> NormalForm:
    """The normal form of `first` followed by `second`."""
    if first.target != second.source:
        raise InvalidInput("normal forms do not compose")
    c = _cache(Q)
    diff = c.degree(Q, first.source, first.target) + c.degree(Q, second.source, second.target) \
        - c.degree(Q, first.source, second.target)
    base, N3 = weight_sub_scalar(diff)
    if not base.is_zero() or N3 < 0:
        raise TheoremViolation(f"degrees along {first.source}->{first.target}->{second.target} are not additive up to C_0")
    return NormalForm(first.source, second.target, first.N + second.N + N3)


# -- relations and the rewriting oracle -----------------------------------

@dataclass(frozen=True)
class Relation:
    arrow: int
    plus: tuple[int, ...]
    minus: tuple[int, ...]


def relations(Q: QuiverWithFaces) -> list[Relation]:
    return [Relation(a.id, Q.return_path(a.id, PLUS), Q.return_path(a.id, MINUS))
            for a in Q.arrows.values() if not a.is_boundary]


class Verdict(enum.Enum):
    EQUIVALENT = "equivalent"
    NOT_EQUIVALENT = "not-equivalent"
    UNKNOWN = "not-within-budget"


@dataclass(frozen=True)
class RewriteResult:
    verdict: Verdict
    expanded: int

    @property
    def concluded(self) -> bool:
        return self.verdict is not Verdict.UNKNOWN


class Rewriter:
    """Single-relation substitutions p+ <-> p- on arrow sequences."""

    def __init__(self, rels: Iterable[Relation]):
        self.by_first: dict[int, list[tuple[tuple[int, ...], tuple[int, ...]]]] = defaultdict(list)
        for r in rels:
            self.by_first[r.plus[0]].append((r.plus, r.minus))
            self.by_first[r.minus[0]].append((r.minus, r.plus))

    def neighbours(self, path: tuple[int, ...]) -> Iterable[tuple[int, ...]]:
        L = len(path)
        for pos in range(L):
            for side, repl in self.by_first.get(path[pos], ()):
                m = len(side)
                if pos + m <= L and path[pos:pos + m] == side:
                    yield path[:pos] + repl + path[pos + m:]

    def equivalent(self, p: tuple[int, ...], q: tuple[int, ...], budget: int) -> RewriteResult:
        """Bidirectional breadth-first search; `budget` caps expanded states."""
        if p == q:
            return RewriteResult(Verdict.EQUIVALENT, 0)
        seen = [{p}, {q}]
        frontier = [[p], [q]]
        expanded = 0
        while True:
            if not frontier[0] or not frontier[1]:
                return RewriteResult(Verdict.NOT_EQUIVALENT, expanded)
            side = 0 if len(frontier[0]) <= len(frontier[1]) else 1
            other = seen[1 - side]
            nxt = []
            for state in frontier[side]:
                if expanded >= budget:
                    return RewriteResult(Verdict.UNKNOWN, expanded)
                expanded += 1
                for nb in self.neighbours(state):
                    if nb in other:
                        return RewriteResult(Verdict.EQUIVALENT, expanded)
                    if nb not in seen[side]:
                        seen[side].add(nb)
                        nxt.append(nb)
            frontier[side] = nxt

    def closure(self, p: tuple[int, ...], budget: int) -> set[tuple[int, ...]] | None:
        """Full class of p, or None if it exceeds the budget."""
        seen = {p}
        frontier = [p]
        expanded = 0
        while frontier:
            nxt = []
            for state in frontier:
                expanded += 1
                if expanded > budget:
                    return None
                for nb in self.neighbours(state):
                    if nb not in seen:
                        seen.add(nb)
                        nxt.append(nb)
            frontier = nxt
        return seen


def rewriter(Q: QuiverWithFaces) -> Rewriter:
    r = getattr(Q, "_rewriter", None)
    if r is None:
        r = Rewriter(relations(Q))
        Q._rewriter = r
    return r


def rewrite_equiv(Q: QuiverWithFaces, p: QuiverPath, q: QuiverPath, budget: int = 100_000) -> RewriteResult:
    if (p.source, p.target) != (q.source, q.target):
        raise InvalidInput("paths must share source and target")
    if budget < 0:
        raise InvalidInput("budget must be nonnegative")
    return rewriter(Q).equivalent(p.arrows, q.arrows, budget)


def random_path_pairs(Q: QuiverWithFaces, count: int, max_len: int, rng: random.Random,
                      walks: int = 4000) -> list[tuple[QuiverPath, QuiverPath]]:
    """Seeded pairs of distinct paths with shared endpoints and at most max_len arrows."""
    outs = defaultdict(list)
    for a in sorted(Q.arrows):
        outs[Q.arrows[a].tail].append(a)
    starts = sorted(v for v in Q.vertices if outs[v])
    buckets: dict[tuple[str, str], set] = defaultdict(set)
    for _ in range(walks):
        v = rng.choice(starts)
        path = []
        for _ in range(rng.randint(1, max_len)):
            if not outs[v]:
                break
            a = rng.choice(outs[v])
            path.append(a)
            v = Q.arrows[a].head
        if path:
            buckets[(Q.arrows[path[0]].tail, v)].add(tuple(path))
    keys = sorted(k for k, b in buckets.items() if len(b) >= 2)
    if not keys:
        raise InvalidInput("no two random paths share endpoints")
    pairs = []
    for _ in range(count):
        key = rng.choice(keys)
        p, q = rng.sample(sorted(buckets[key]), 2)
        pairs.append((QuiverPath(p, *key), QuiverPath(q, *key)))
    return pairs


# -- graded pieces and the centre ------------------------------------------

def face_loop_path(Q: QuiverWithFaces, v: str, fid: int | None = None) -> QuiverPath:
    faces = Q.faces_at(v)
    if not faces:
        raise InvalidInput(f"no face passes through {v}")
    f = min(faces) if fid is None else fid
    return make_path(Q, Q.face_loop(f, v), v)


def graded_hom_dim(Q: QuiverWithFaces, I: str, J: str, d: int, base: QuiverPath | None = None) -> int:
    """Dimension of the span of paths I -> J of grade at most d.

    Realised as the distinct normal forms of the minimal path followed by up
    to d face loops at J.
    """
    if d < 0:
        raise InvalidInput("grade must be nonnegative")
    p = minimal_path(Q, I, J) if base is None else base
    loop = face_loop_path(Q, J)
    forms = set()
    for N in range(d + 1):
        forms.add(normalize(Q, p))
        p = p.then(loop)
    return len(forms)


@dataclass
class CheckReport:
    name: str
    violations: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations


def central_element_check(Q: QuiverWithFaces) -> CheckReport:
    rep = CheckReport("central element")
    for v in Q.vertices:
        forms = {normalize(Q, make_path(Q, Q.face_loop(f, v), v)) for f in Q.faces_at(v)}
        if forms != {NormalForm(v, v, 1)}:
            rep.violations.append(f"face loops at {v} normalise to {sorted(forms)}")
        loops = [make_path(Q, Q.face_loop(f, v), v) for f in Q.faces_at(v)]
        if len(loops) >= 2 and normalize(Q, loops[0].then(loops[1])) != NormalForm(v, v, 2):
            rep.violations.append(f"two face loops at {v} do not give u^2")
    for a in Q.arrows.values():
        arrow = make_path(Q, [a.id])
        for f in Q.faces_at(a.head):
            left = arrow.then(make_path(Q, Q.face_loop(f, a.head), a.head))
            for g in Q.faces_at(a.tail):
                right = make_path(Q, Q.face_loop(g, a.tail), a.tail).then(arrow)
                nl, nr = normalize(Q, left), normalize(Q, right)
                if nl != nr or nl.N != 1:
                    rep.violations.append(f"u does not commute with arrow {a.tail}->{a.head}")
    return rep


# -- boundary algebra --------------------------------------------------------

@dataclass
class BoundaryReport:
    k: int
    n: int
    y_weights: dict[int, tuple[int, ...]]
    x_weights: dict[int, tuple[int, ...]]
    table: dict[tuple[int, str], tuple[int, int]]  # (start j, word) -> (end j, N)
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def signature(self) -> tuple:
        return (self.k, self.n, sorted(self.y_weights.items()), sorted(self.x_weights.items()),
                sorted(self.table.items()))


def boundary_generators(Q: QuiverWithFaces) -> tuple[dict[int, QuiverPath], dict[int, QuiverPath]]:
    """y_j: E_j -> E_(j+1) and x_j: E_(j+1) -> E_j as minimal paths."""
    n = Q.n
    E = {j: Q.boundary_vertex(j) for j in range(1, n + 1)}
    ys = {j: minimal_path(Q, E[j], E[reduce_index(j + 1, n)]) for j in E}
    xs = {j: minimal_path(Q, E[reduce_index(j + 1, n)], E[j]) for j in E}
    return ys, xs


def _word_path(ys, xs, j: int, word: str, n: int) -> tuple[QuiverPath, int]:
    path = None
    cur = j
    for ch in word:
        if ch == "y":
            step, cur = ys[cur], reduce_index(cur + 1, n)
        else:
            cur = reduce_index(cur - 1, n)
            step = xs[cur]
        path = step if path is None else path.then(step)
    return path, cur


def boundary_algebra(Q: QuiverWithFaces, max_word: int = 3, max_grade: int | None = 5) -> BoundaryReport:
    """Generator weights, the B^opp relations, the word table and (unless
    max_grade is None) graded dimensions against B."""
    k, n = Q.k, Q.n
    C0 = full_weight(n)
    ys, xs = boundary_generators(Q)
    E = {j: Q.label(Q.boundary_vertex(j)) for j in range(1, n + 1)}
    rep = BoundaryReport(k, n, {}, {}, {})
    for j in range(1, n + 1):
        wy, wx = path_weight(Q, ys[j]), path_weight(Q, xs[j])
        ej = Weight.from_support(E[j], n)
        rep.y_weights[j] = wy.counts
        rep.x_weights[j] = wx.counts
        if wy != ej:
            rep.violations.append(f"y-generator at E_{j} has weight {wy}, expected E_{j}")
        if wx != C0 - ej:
            rep.violations.append(f"x-generator at E_{j} has weight {wx}, expected C_0 - E_{j}")
    for j in range(1, n + 1):
        for word, expect in (("yx", 1), ("xy", 1)):
            p, end = _word_path(ys, xs, j, word, n)
            nf = normalize(Q, p)
            if end != j or nf.N != expect:
                rep.violations.append(f"{word} at E_{j} gives {nf}, expected u e")
        px, ex = _word_path(ys, xs, j, "x" * k, n)
        py, ey = _word_path(ys, xs, j, "y" * (n - k), n)
        if ex != ey or normalize(Q, px) != normalize(Q, py):
            rep.violations.append(f"x^{k} != y^{n - k} at E_{j}")
    words = [""]
    for _ in range(max_word):
        words = [w + c for w in words for c in "xy"]
        for j in range(1, n + 1):
            for w in words:
                p, end = _word_path(ys, xs, j, w, n)
                rep.table[(j, w)] = (end, normalize(Q, p).N)
    for i in range(1, n + 1 if max_grade is not None else 1):
        for j in range(1, n + 1):
            vi, vj = Q.boundary_vertex(i), Q.boundary_vertex(j)
            total = sum(_cache(Q).degree(Q, vi, vj).counts)
            if total != b_min_degree(n, k, i, j):
                rep.violations.append(f"minimal degree E_{i}->E_{j} is {total}, B gives {b_min_degree(n, k, i, j)}")
            base = minimal_path(Q, vi, vj)
            for d in range(max_grade + 1):
                a, b = graded_hom_dim(Q, vi, vj, d, base), b_normal_count(n, k, i, j, d)
                if a != b:
                    rep.violations.append(f"grade {d} piece E_{i}->E_{j}: {a} vs {b}")
    return rep


def b_min_degree(n: int, k: int, i: int, j: int) -> int:
    """Least total degree of a path from E_i to E_j in B^opp (y steps +1 cost k, x steps -1 cost n-k)."""
    shift = (i - j) % n
    return min(a * (n - k) + ((a - shift) % n) * k for a in range(k))
