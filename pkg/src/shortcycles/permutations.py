"""Permutations in one-line notation and their cycle statistics.

A permutation of {0, ..., n-1} is stored as the tuple of images: ``mapping[i]``
is where ``i`` goes.  Cycle structure is always derived from this array, never
stored as an independent source of truth, which keeps composition with a
transposition O(n) and validation trivial.

The downstream statistic of interest is the vector of small-cycle counts:
entry ``k`` of a :class:`CountsVector` is the number of cycles of length
exactly ``k``.  Everything here is immutable and safe to share between
threads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence


class Permutation:
    """A bijection on {0, ..., n-1} in one-line notation.

    >>> Permutation((1, 0, 2)).mapping
    (1, 0, 2)
    """

    __slots__ = ("mapping",)

    def __init__(self, mapping: Sequence[int]):
        mapping = tuple(mapping)
        n = len(mapping)
        if n == 0:
            raise ValueError("permutation must act on at least one element")
        seen = bytearray(n)
        for image in mapping:
            if not 0 <= image < n:
                raise ValueError(f"image {image} outside 0..{n - 1}")
            if seen[image]:
                raise ValueError(f"image {image} appears twice; not a bijection")
            seen[image] = 1
        self.mapping = mapping

    @property
    def n(self) -> int:
        return len(self.mapping)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.mapping == other.mapping

    def __hash__(self) -> int:
        return hash(self.mapping)

    def __repr__(self) -> str:
        return f"Permutation({list(self.mapping)})"


@dataclass(frozen=True)
class Transposition:
    """An unordered pair swap; (a, b) and (b, a) are the same object."""

    a: int
    b: int

    def __init__(self, a: int, b: int):
        if a == b:
            raise ValueError("transposition needs two distinct indices")
        if a < 0 or b < 0:
            raise ValueError("indices must be non-negative")
        object.__setattr__(self, "a", min(a, b))
        object.__setattr__(self, "b", max(a, b))


@dataclass(frozen=True)
class CycleStructure:
    """Disjoint cycles of a permutation, sorted by smallest element.

    Each cycle is written starting from its smallest element and following
    the permutation.  ``cycle_id[x]`` is the index into ``cycles`` of the
    cycle containing ``x``; ``cycle_length[x]`` caches that cycle's length.
    """

    cycles: tuple[tuple[int, ...], ...]
    lengths: tuple[int, ...]
    cycle_id: tuple[int, ...]
    cycle_length: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.cycle_id)


@dataclass(frozen=True)
class CountsVector:
    """Counts of cycles by length: ``counts[k-1]`` cycles of length k, k <= d."""

    counts: tuple[int, ...]

    @property
    def d(self) -> int:
        return len(self.counts)

    def weighted_sum(self) -> int:
        """Total number of elements lying in cycles of length <= d."""
        return sum(k * c for k, c in enumerate(self.counts, start=1))


def cycle_structure(p: Permutation) -> CycleStructure:
    """Decompose ``p`` into disjoint cycles.

    Cycles are reported sorted by their smallest element, each starting at
    that element, so the output is deterministic.
    """
    n = p.n
    mapping = p.mapping
    seen = bytearray(n)
    cycles: list[tuple[int, ...]] = []
    cycle_id = [0] * n
    cycle_length = [0] * n
    for start in range(n):
        if seen[start]:
            continue
        cycle = [start]
        seen[start] = 1
        x = mapping[start]
        while x != start:
            cycle.append(x)
            seen[x] = 1
            x = mapping[x]
        cid = len(cycles)
        for x in cycle:
            cycle_id[x] = cid
            cycle_length[x] = len(cycle)
        cycles.append(tuple(cycle))
    lengths = tuple(sorted(len(c) for c in cycles))
    return CycleStructure(tuple(cycles), lengths, tuple(cycle_id), tuple(cycle_length))


def cycle_counts(p: Permutation, d: int) -> CountsVector:
    """Number of cycles of each length 1..d in ``p``."""
    if not 1 <= d <= p.n:
        raise ValueError(f"d must be in 1..{p.n}, got {d}")
    counts = [0] * d
    for length in cycle_structure(p).lengths:
        if length <= d:
            counts[length - 1] += 1
    return CountsVector(tuple(counts))


def apply_transposition(p: Permutation, t: Transposition) -> Permutation:
    """Compose: first ``p``, then swap the images ``t.a`` and ``t.b``.

    Self-inverse for fixed ``t``.  If ``t.a`` and ``t.b`` lie in the same
    cycle of ``p`` the cycle splits in two; otherwise their cycles merge.
    """
    if t.b >= p.n:
        raise ValueError(f"transposition index {t.b} outside 0..{p.n - 1}")
    new = list(p.mapping)
    ia = new.index(t.a)
    ib = new.index(t.b)
    new[ia], new[ib] = new[ib], new[ia]
    return Permutation(new)


def longest_cycle(p: Permutation) -> int:
    """Length of the longest cycle of ``p``."""
    return max(cycle_structure(p).lengths)


def permutations_with_bounded_cycles(n: int, r: int) -> Iterator[Permutation]:
    """All permutations of n elements whose every cycle has length <= r.

    Plain filtered enumeration of all n! arrays; intended for small n.
    """
    if not 1 <= r:
        raise ValueError("r must be positive")
    for mapping in itertools.permutations(range(n)):
        p = Permutation(mapping)
        if longest_cycle(p) <= r:
            yield p
