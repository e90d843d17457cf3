"""k-subsets of {1..n}, weak separation and maximal weakly separated collections."""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .cyclic import check_index, closed_interval
from .errors import InvalidInput, ResourceGuard

KSubset = frozenset  # elements in 1..n; k and n travel alongside

ENUMERATION_GUARD = 400


def make_subset(elements: Iterable[int], n: int, k: int | None = None) -> frozenset[int]:
    elems = list(elements)
    s = frozenset(check_index(e, n) for e in elems)
    if len(s) != len(elems):
        raise InvalidInput(f"repeated element in {elems}")
    if k is not None and len(s) != k:
        raise InvalidInput(f"{sorted(s)} is not a {k}-subset")
    return s


def label_str(I: Iterable[int], n: int) -> str:
    """Canonical text form: sorted digits for n < 10, dotted otherwise."""
    elems = sorted(I)
    if n < 10:
        return "".join(str(e) for e in elems) or "-"
    return ".".join(str(e) for e in elems) or "-"


def parse_label(text: str, n: int) -> frozenset[int]:
    text = text.strip()
    if text == "-":
        return frozenset()
    if "." in text or "," in text:
        parts = text.replace(",", ".").split(".")
        elems = [int(p) for p in parts if p]
    elif n < 10:
        elems = [int(ch) for ch in text]
    else:
        raise InvalidInput(f"label {text!r} is ambiguous for n={n}; separate elements with '.'")
    return make_subset(elems, n)


def sort_key(I: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(I))


def _sides(I: frozenset[int], J: frozenset[int]) -> list[tuple[int, bool]]:
    # symmetric difference in increasing order, flagged True for elements of I
    return sorted([(e, True) for e in I - J] + [(e, False) for e in J - I])


def _transitions(I: frozenset[int], J: frozenset[int]) -> int:
    seq = _sides(I, J)
    return sum(1 for t in range(len(seq)) if seq[t][1] != seq[t - 1][1])


def is_weakly_separated(I: frozenset[int], J: frozenset[int], n: int | None = None) -> bool:
    """No a < b < c < d (cyclically) with a, c in I-J and b, d in J-I."""
    if len(I) != len(J):
        raise InvalidInput(f"{sorted(I)} and {sorted(J)} have different sizes")
    if n is not None:
        for e in I | J:
            check_index(e, n)
    return _transitions(I, J) <= 2


def boundary_label(j: int, k: int, n: int) -> frozenset[int]:
    """E_j = [j-k+1, j]."""
    check_index(j, n)
    if not 0 <= k <= n:
        raise InvalidInput(f"k={k} outside 0..{n}")
    if k == 0:
        return frozenset()
    return frozenset(closed_interval((j - k) % n + 1, j, n))


def boundary_labels(k: int, n: int) -> list[frozenset[int]]:
    return [boundary_label(j, k, n) for j in range(1, n + 1)]


def ab_pair(I: frozenset[int], J: frozenset[int], n: int) -> tuple[int, int]:
    """(a, b) = (j_2, i_1): last element of the interval hull of J-I, first of I-J."""
    if len(I) != len(J):
        raise InvalidInput("ab_pair needs subsets of equal size")
    if I == J:
        raise InvalidInput("ab_pair is undefined for I = J")
    for e in I | J:
        check_index(e, n)
    seq = _sides(I, J)
    starts = [t for t in range(len(seq)) if seq[t][1] and not seq[t - 1][1]]
    if len(starts) != 1:
        raise InvalidInput(f"{label_str(I, n)} and {label_str(J, n)} are not weakly separated")
    t = starts[0]
    return seq[t - 1][0], seq[t][0]


@dataclass(frozen=True)
class Collection:
    k: int
    n: int
    members: tuple[frozenset[int], ...] = field(default=())

    def __post_init__(self):
        if not (isinstance(self.n, int) and isinstance(self.k, int) and 1 <= self.k <= self.n - 1):
            raise InvalidInput(f"need 1 <= k <= n-1, got k={self.k}, n={self.n}")
        ms = set()
        for m in self.members:
            ms.add(make_subset(m, self.n, self.k))
        object.__setattr__(self, "members", tuple(sorted(ms, key=sort_key)))

    @property
    def boundary(self) -> list[frozenset[int]]:
        return boundary_labels(self.k, self.n)

    def __contains__(self, I) -> bool:
        return frozenset(I) in set(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def labels(self) -> list[str]:
        return [label_str(m, self.n) for m in self.members]

    def replace(self, old: frozenset[int], new: frozenset[int]) -> "Collection":
        return Collection(self.k, self.n, tuple(m for m in self.members if m != old) + (new,))

    def to_json(self) -> str:
        return json.dumps({"k": self.k, "n": self.n, "labels": [sorted(m) for m in self.members]})

    @classmethod
    def from_json(cls, text: str) -> "Collection":
        try:
            data = json.loads(text)
            return cls(int(data["k"]), int(data["n"]), tuple(frozenset(l) for l in data["labels"]))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidInput):
                raise
            raise InvalidInput(f"malformed collection JSON: {exc}") from exc


def from_labels(k: int, n: int, labels: Sequence[str | Iterable[int]]) -> Collection:
    members = [parse_label(l, n) if isinstance(l, str) else make_subset(l, n) for l in labels]
    return Collection(k, n, tuple(members))


def pairwise_separated(members: Sequence[frozenset[int]]) -> tuple[frozenset[int], frozenset[int]] | None:
    """First crossing pair, or None."""
    for I, J in itertools.combinations(members, 2):
        if not is_weakly_separated(I, J):
            return I, J
    return None


def is_maximal(C: Collection) -> bool:
    have = set(C.members)
    if pairwise_separated(C.members) is not None:
        return False
    if any(E not in have for E in C.boundary):
        return False
    for cand in itertools.combinations(range(1, C.n + 1), C.k):
        S = frozenset(cand)
        if S not in have and all(is_weakly_separated(S, M) for M in C.members):
            return False
    return True


def build_maximal_collection(k: int, n: int, seed: Collection | Iterable[frozenset[int]] | None = None) -> Collection:
    """Extend seed plus the boundary labels greedily in lexicographic order."""
    base = Collection(k, n, ())
    members = list(base.boundary)
    if seed is not None:
        seed_members = seed.members if isinstance(seed, Collection) else [make_subset(s, n, k) for s in seed]
        members += list(seed_members)
    members = sorted(set(members), key=sort_key)
    bad = pairwise_separated(members)
    if bad is not None:
        raise InvalidInput(f"seed labels {label_str(bad[0], n)} and {label_str(bad[1], n)} cross")
    have = set(members)
    for cand in itertools.combinations(range(1, n + 1), k):
        S = frozenset(cand)
        if S not in have and all(is_weakly_separated(S, M) for M in members):
            members.append(S)
            have.add(S)
    C = Collection(k, n, tuple(members))
    assert is_maximal(C)
    return C


def enumerate_maximal_collections(k: int, n: int, limit: int | None = None) -> list[Collection]:
    """All maximal weakly separated collections (up to limit), in canonical order.

    Maximal cliques of the separation graph on the non-boundary subsets;
    boundary labels are separated from everything so they join every clique.
    """
    Collection(k, n, ())
    if math.comb(n, k) > ENUMERATION_GUARD:
        raise ResourceGuard(f"C({n},{k}) = {math.comb(n, k)} exceeds the enumeration guard {ENUMERATION_GUARD}")
    boundary = set(boundary_labels(k, n))
    nodes = [frozenset(c) for c in itertools.combinations(range(1, n + 1), k)]
    nodes = [v for v in nodes if v not in boundary]
    idx = {v: t for t, v in enumerate(nodes)}
    nbrs = [frozenset(idx[w] for w in nodes if w != v and is_weakly_separated(v, w)) for v in nodes]

    found: list[frozenset[int]] = []

    def expand(R: frozenset[int], P: frozenset[int], X: frozenset[int]):
        if limit is not None and len(found) >= limit:
            return
        if not P and not X:
            found.append(R)
            return
        pivot = max(sorted(P | X), key=lambda u: len(P & nbrs[u]))
        for v in sorted(P - nbrs[pivot]):
            expand(R | {v}, P & nbrs[v], X & nbrs[v])
            P = P - {v}
            X = X | {v}

    expand(frozenset(), frozenset(range(len(nodes))), frozenset())
    out = [Collection(k, n, tuple(boundary) + tuple(nodes[t] for t in R)) for R in found]
    return sorted(out, key=lambda C: tuple(sort_key(m) for m in C.members))
