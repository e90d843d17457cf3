"""Index arithmetic on the cycle Z_n (1-based) and integer weights over it."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidInput


def reduce_index(i: int, n: int) -> int:
    """Representative of i mod n in 1..n."""
    if n < 1:
        raise InvalidInput(f"modulus must be positive, got {n}")
    return (i - 1) % n + 1


def check_index(i: int, n: int) -> int:
    if not isinstance(i, int) or isinstance(i, bool) or not 1 <= i <= n:
        raise InvalidInput(f"index {i!r} outside 1..{n}")
    return i


def closed_interval(a: int, b: int, n: int) -> list[int]:
    """[a, b] = a, a+1, ..., b taken cyclically; never empty."""
    check_index(a, n)
    check_index(b, n)
    length = (b - a) % n + 1
    return [reduce_index(a + t, n) for t in range(length)]


def open_interval(a: int, b: int, n: int) -> list[int]:
    """(a, b)_0 = [a, b-1]; empty exactly when a == b."""
    check_index(a, n)
    check_index(b, n)
    return [reduce_index(a + t, n) for t in range((b - a) % n)]


@dataclass(frozen=True)
class Weight:
    """A vector of integers indexed by the vertices 1..n of the cycle."""

    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) == 0:
            raise InvalidInput("weights need n >= 1")
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))

    @classmethod
    def _raw(cls, counts: tuple[int, ...]) -> "Weight":
        w = object.__new__(cls)
        object.__setattr__(w, "counts", counts)
        return w

    @property
    def n(self) -> int:
        return len(self.counts)

    @classmethod
    def zero(cls, n: int) -> "Weight":
        return cls((0,) * n)

    @classmethod
    def from_support(cls, support: Iterable[int], n: int) -> "Weight":
        counts = [0] * n
        for i in support:
            counts[check_index(i, n) - 1] += 1
        return cls(tuple(counts))

    def __getitem__(self, i: int) -> int:
        return self.counts[check_index(i, self.n) - 1]

    def _check(self, other: "Weight"):
        if not isinstance(other, Weight):
            return NotImplemented
        if other.n != self.n:
            raise InvalidInput(f"weights over Z_{self.n} and Z_{other.n} cannot be combined")
        return None

    def __add__(self, other: "Weight") -> "Weight":
        bad = self._check(other)
        if bad is not None:
            return bad
        return Weight._raw(tuple(a + b for a, b in zip(self.counts, other.counts)))

    def __sub__(self, other: "Weight") -> "Weight":
        bad = self._check(other)
        if bad is not None:
            return bad
        return Weight._raw(tuple(a - b for a, b in zip(self.counts, other.counts)))

    def scale(self, m: int) -> "Weight":
        return Weight(tuple(m * a for a in self.counts))

    def support(self) -> frozenset[int]:
        return frozenset(i + 1 for i, c in enumerate(self.counts) if c != 0)

    def is_zero(self) -> bool:
        return not any(self.counts)

    def min(self) -> int:
        return min(self.counts)

    def is_uniform(self) -> bool:
        return len(set(self.counts)) == 1

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.counts) + ")"


def full_weight(n: int) -> Weight:
    """The constant C_0 = (1, ..., 1)."""
    if not isinstance(n, int) or n < 1:
        raise InvalidInput(f"full weight needs n >= 1, got {n!r}")
    return Weight((1,) * n)


def interval_vertices(a: int, b: int, n: int) -> Weight:
    """0/1 weight supported on (a, b)_0."""
    return Weight.from_support(open_interval(a, b, n), n)


def weight_sub_scalar(w: Weight) -> tuple[Weight, int]:
    """Split w = base + N*C_0 with min(base) = 0."""
    N = w.min()
    return w - full_weight(w.n).scale(N), N


def weight_sum(weights: Iterable[Weight], n: int) -> Weight:
    total = [0] * n
    for w in weights:
        if w.n != n:
            raise InvalidInput(f"weight over Z_{w.n} in a sum over Z_{n}")
        for i, c in enumerate(w.counts):
            total[i] += c
    return Weight._raw(tuple(total))


def rotate_weight(w: Weight, shift: int) -> Weight:
    """Weight moved along the cycle: new[i + shift] = old[i]."""
    n = w.n
    counts = [0] * n
    for i, c in enumerate(w.counts):
        counts[(i + shift) % n] = c
    return Weight(tuple(counts))


def as_vector(w: Weight | Sequence[int]) -> tuple[int, ...]:
    return w.counts if isinstance(w, Weight) else tuple(w)
