"""Shared domain types, the tie-broken total order, and the sort-based oracle.

Every structure in this package answers the same question: given an unsorted
array, what is the element of rank p among A[L..R]?  This module fixes the
conventions all of them share (1-based positions, lower median, ties broken by
original position) and provides the brute-force reference answer used to test
everything else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence


class Element(NamedTuple):
    """One array entry: its value and its 1-based position in the input.

    The field order is (value, index) on purpose: plain tuple comparison then
    realizes the total order "by value, ties broken by original position", so
    elements with equal values still compare strictly.
    """

    value: float
    index: int


def total_cmp(a: Element, b: Element) -> int:
    """Three-way comparison under the (value, index) lexicographic order.

    Returns -1, 0 or 1.  This is a strict total order as long as no two
    elements share an index, even when values repeat.
    """
    if a < b:
        return -1
    if a > b:
        return 1
    return 0


def median_rank(m: int) -> int:
    """Rank of the lower median in a multiset of size m: ceil(m/2)."""
    if m < 1:
        raise ValueError(f"median_rank requires m >= 1, got {m}")
    return (m + 1) // 2


def as_elements(values: Sequence) -> list[Element]:
    """Wrap raw values as Elements with 1-based positions.

    Rejects empty input and NaN values (NaN would break the total order);
    +-inf is fine.
    """
    if len(values) == 0:
        raise ValueError("empty input array")
    elems = []
    for i, v in enumerate(values, start=1):
        if isinstance(v, float) and math.isnan(v):
            raise ValueError(f"NaN value at position {i}")
        elems.append(Element(v, i))
    return elems


@dataclass(frozen=True)
class RangeQuery:
    """Closed 1-based query range [L, R] with an optional rank p.

    When p is absent the query asks for the lower median of the window,
    i.e. rank ceil((R - L + 1) / 2).
    """

    L: int
    R: int
    p: int | None = None

    def validate(self, n: int) -> None:
        if not 1 <= self.L <= self.R <= n:
            raise ValueError(
                f"invalid range [{self.L}, {self.R}] for array of length {n}"
            )
        size = self.R - self.L + 1
        if self.p is not None and not 1 <= self.p <= size:
            raise ValueError(f"rank {self.p} out of range for window of size {size}")

    def rank(self) -> int:
        """The requested rank; defaults to the lower median of the window."""
        if self.p is not None:
            return self.p
        return median_rank(self.R - self.L + 1)


@dataclass
class Stats:
    """Instrumentation counters shared by all structures.

    All counters only ever grow during a run; tests assert on deltas around
    individual operations.
    """

    splits_per_level: dict[int, int] = field(default_factory=dict)
    elements_partitioned: int = 0
    cascade_steps: int = 0
    rebuild_elements: int = 0
    comparisons: int = 0

    def record_split(self, level: int, size: int) -> None:
        self.splits_per_level[level] = self.splits_per_level.get(level, 0) + 1
        self.elements_partitioned += size

    def total_splits(self) -> int:
        return sum(self.splits_per_level.values())


def oracle_select(values: Sequence, q: RangeQuery) -> Element:
    """Ground truth: copy A[L..R], sort under the total order, take rank p.

    Accepts either raw values or a prepared Element list (positions must then
    be 1..n in order).  Every other structure in the package is tested for
    exact agreement with this function.
    """
    if len(values) > 0 and isinstance(values[0], Element):
        elems = values
    else:
        elems = as_elements(values)
    q.validate(len(elems))
    window = sorted(elems[q.L - 1 : q.R])
    return window[q.rank() - 1]
