"""The circle algebra B, rank-one modules as rim profiles, and the degree of
the minimal monomial morphism between two of them."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .collection import ab_pair, is_weakly_separated
from .cyclic import Weight, full_weight, interval_vertices, reduce_index, weight_sum
from .errors import InvalidInput


@dataclass(frozen=True)
class RimProfile:
    """Heights h(0..n) of the top rim; a step is -1 exactly on edges in I."""

    heights: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.heights) - 1


def rim_profile(I: Iterable[int], n: int) -> RimProfile:
    I = frozenset(I)
    for i in I:
        if not 1 <= i <= n:
            raise InvalidInput(f"{i} outside 1..{n}")
    h = [0]
    for i in range(1, n + 1):
        h.append(h[-1] - 1 if i in I else h[-1] + 1)
    return RimProfile(tuple(h))


@dataclass(frozen=True)
class BPresentation:
    """Doubled n-cycle with x_i: i-1 -> i, y_i: i -> i-1 and relations at each vertex."""

    n: int
    k: int

    @property
    def generators(self) -> list[str]:
        return [f"x{i}" for i in range(1, self.n + 1)] + [f"y{i}" for i in range(1, self.n + 1)]

    @property
    def relations(self) -> list[tuple[int, str]]:
        """(vertex, relation) pairs: xy = yx and x^k = y^(n-k) at every vertex."""
        out = []
        for v in range(1, self.n + 1):
            out.append((v, "xy=yx"))
            out.append((v, f"x^{self.k}=y^{self.n - self.k}"))
        return out


def b_presentation(n: int, k: int) -> BPresentation:
    if not 1 <= k <= n - 1:
        raise InvalidInput(f"need 1 <= k <= n-1, got k={k}, n={n}")
    return BPresentation(n, k)


def deg_min_formula(I: frozenset, J: frozenset, n: int) -> Weight:
    """Degree of g_JI as the sum of (b_j, a_j)_0 over the paired differences."""
    if I == J:
        return Weight.zero(n)
    a, b = ab_pair(I, J, n)
    bs = sorted(I - J, key=lambda x: (x - b) % n)  # clockwise from b
    as_ = sorted(J - I, key=lambda x: (a - x) % n)  # anticlockwise from a
    return weight_sum((interval_vertices(bj, aj, n) for bj, aj in zip(bs, as_)), n)


def deg_min_oracle(I: frozenset, J: frozenset, n: int) -> Weight:
    """Degree of the highest embedding of the lattice of I into that of J.

    Works for any pair of k-subsets, separated or not.
    """
    if len(I) != len(J):
        raise InvalidInput("degree needs subsets of equal size")
    hI, hJ = rim_profile(I, n).heights, rim_profile(J, n).heights
    d = []
    for i in range(1, n + 1):
        diff = hJ[i] - hI[i]
        if diff % 2:
            raise AssertionError("height parity violated")
        d.append(diff // 2)
    m = -min(d)
    return Weight(tuple(x + m for x in d))


def deg_min(I: frozenset, J: frozenset, n: int) -> Weight:
    return deg_min_formula(I, J, n)


def leq_V(I: frozenset, J: frozenset, V: Iterable[int], n: int) -> bool:
    """I <=_V J: the degree of g_JI avoids V."""
    if I != J and not is_weakly_separated(I, J):
        raise InvalidInput("leq_V needs a weakly separated pair")
    return not (deg_min_formula(I, J, n).support() & frozenset(V))


# -- graded counts in B ----------------------------------------------------

def _letter_degrees(n: int, k: int) -> tuple[int, int]:
    # x^k = y^(n-k) is homogeneous when deg x = n-k and deg y = k; then deg(xy) = n
    return n - k, k


def b_normal_count(n: int, k: int, i: int, j: int, d: int) -> int:
    """Number of normal monomials x^a y^b (a < k) from j to i of grade <= d."""
    if d < 0:
        raise InvalidInput("grade must be nonnegative")
    dx, dy = _letter_degrees(n, k)
    shift = (i - j) % n
    cands = []
    for a in range(k):
        b0 = (a - shift) % n
        cands.append((a, b0))
    base = min(a * dx + b * dy for a, b in cands)
    bound = base + d * n
    count = 0
    for a, b0 in cands:
        b = b0
        while a * dx + b * dy <= bound:
            count += 1
            b += n
    return count


def b_path_classes(n: int, k: int, i: int, j: int, d: int) -> int:
    """Brute-force count: all x/y words from j to i up to the degree bound,
    merged by single applications of xy = yx and x^k = y^(n-k)."""
    dx, dy = _letter_degrees(n, k)
    shift = (i - j) % n
    base = min(a * dx + ((a - shift) % n) * dy for a in range(k))
    bound = base + d * n
    words = []

    def grow(w: str, deg: int, pos: int):
        if pos % n == shift:
            words.append(w)
        if deg + dx <= bound:
            grow(w + "x", deg + dx, pos + 1)
        if deg + dy <= bound:
            grow(w + "y", deg + dy, pos - 1)

    grow("", 0, 0)
    index = {w: t for t, w in enumerate(words)}
    parent = list(range(len(words)))

    def find(t: int) -> int:
        while parent[t] != t:
            parent[t] = parent[parent[t]]
            t = parent[t]
        return t

    lhs, rhs = "x" * k, "y" * (n - k)
    for w in words:
        for p in range(len(w) - 1):
            if w[p:p + 2] in ("xy", "yx"):
                v = w[:p] + w[p + 1] + w[p] + w[p + 2:]
                parent[find(index[w])] = find(index[v])
        for p in range(len(w)):
            if w.startswith(lhs, p):
                v = w[:p] + rhs + w[p + len(lhs):]
                if v in index:
                    parent[find(index[w])] = find(index[v])
    return len({find(t) for t in range(len(words))})


def composite_excess(I: frozenset, J: frozenset, K: frozenset, n: int) -> int:
    """m with deg(I,J) + deg(J,K) = deg(I,K) + m*C_0."""
    diff = deg_min_oracle(I, J, n) + deg_min_oracle(J, K, n) - deg_min_oracle(I, K, n)
    if not diff.is_uniform() or diff.min() < 0:
        raise AssertionError(f"composite excess {diff} is not a nonnegative multiple of C_0")
    return diff.min()
