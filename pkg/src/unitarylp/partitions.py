"""Integer partitions, dominance order, and Kostka numbers.

Partitions are plain tuples of weakly decreasing positive integers; the
empty tuple is the empty partition.  Trailing zeros are stripped at
construction so each mathematical object has exactly one representation.
"""

from __future__ import annotations

from functools import cache
from typing import Iterable, Iterator

Partition = tuple[int, ...]


def as_partition(parts: Iterable[int]) -> Partition:
    """Canonicalize a sequence into a partition tuple.

    Validates that the entries are weakly decreasing and nonnegative,
    then strips trailing zeros.
    """
    t = tuple(int(p) for p in parts)
    if any(p < 0 for p in t):
        raise ValueError(f"negative part in {t!r}")
    if any(a < b for a, b in zip(t, t[1:])):
        raise ValueError(f"parts not weakly decreasing: {t!r}")
    while t and t[-1] == 0:
        t = t[:-1]
    return t


def degree(lam: Partition) -> int:
    return sum(lam)


def _partitions_of(k: int, max_parts: int, cap: int) -> Iterator[Partition]:
    # Reverse-lexicographic enumeration: largest first part first.
    if k == 0:
        yield ()
        return
    if max_parts == 0:
        return
    for first in range(min(k, cap), 0, -1):
        for rest in _partitions_of(k - first, max_parts - 1, first):
            yield (first,) + rest


def generate_partitions(degree_max: int, max_parts: int) -> list[Partition]:
    """Every partition with degree <= degree_max and at most max_parts parts.

    Sorted by degree, then reverse-lexicographically within each degree;
    always includes the empty partition.
    """
    if degree_max < 0:
        raise ValueError("degree_max must be nonnegative")
    if max_parts < 1:
        raise ValueError("max_parts must be at least 1")
    out: list[Partition] = []
    for k in range(degree_max + 1):
        out.extend(_partitions_of(k, max_parts, k))
    return out


def dominates(lam: Partition, mu: Partition) -> bool:
    """Dominance order: every prefix sum of lam is >= that of mu.

    Only defined for partitions of equal degree.
    """
    lam = as_partition(lam)
    mu = as_partition(mu)
    if sum(lam) != sum(mu):
        raise ValueError(f"degree mismatch: {lam!r} vs {mu!r}")
    acc_l = acc_m = 0
    for i in range(max(len(lam), len(mu))):
        acc_l += lam[i] if i < len(lam) else 0
        acc_m += mu[i] if i < len(mu) else 0
        if acc_l < acc_m:
            return False
    return True


def horizontal_strips(lam: Partition, size: int) -> Iterator[Partition]:
    """Partitions nu contained in lam with lam/nu a horizontal strip of |size|.

    A horizontal strip has at most one cell per column, which for the
    row lengths means lam[i+1] <= nu[i] <= lam[i].
    """
    lam = as_partition(lam)

    def rec(i: int, remaining: int, acc: tuple[int, ...]) -> Iterator[Partition]:
        if i == len(lam):
            if remaining == 0:
                yield as_partition(acc)
            return
        lo = lam[i + 1] if i + 1 < len(lam) else 0
        for nu_i in range(lam[i], lo - 1, -1):
            removed = lam[i] - nu_i
            if removed > remaining:
                break
            yield from rec(i + 1, remaining - removed, acc + (nu_i,))

    yield from rec(0, size, ())


@cache
def _kostka(lam: Partition, mu: Partition) -> int:
    if not dominates(lam, mu):
        return 0
    if not mu:
        return 1
    # Peel the cells holding the largest entry: they form a horizontal
    # strip of size mu[-1], leaving a tableau with content mu[:-1].
    return sum(_kostka(nu, mu[:-1]) for nu in horizontal_strips(lam, mu[-1]))


def kostka(lam: Partition, mu: Partition) -> int:
    """Number of semistandard Young tableaux of shape lam and content mu.

    Zero unless lam dominates mu; exactly one when lam == mu.
    """
    return _kostka(as_partition(lam), as_partition(mu))
