"""Exact k-th selection and stable threshold partitioning.

Node splits in both tree variants need the true element of rank ceil(m/2)
(never an approximate pivot), plus a partition of the node's elements around
it that preserves their relative order.  Two selection algorithms are
available: worst-case linear median-of-medians, and uniform-pivot quickselect
(expected linear, much smaller constants in practice).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .core import Element, Stats

# below this size selection just insertion-sorts
_SMALL_CUTOFF = 10


@dataclass(frozen=True)
class SelectionStrategy:
    """How splits select their rank-ceil(m/2) element.

    kind "deterministic" is median-of-medians with groups of 5; "randomized"
    is quickselect with a uniformly chosen pivot.  A randomized strategy with
    a fixed seed is fully reproducible; randomness only affects how the exact
    answer is found, never which element is returned.
    """

    kind: str = "randomized"
    rng_seed: int | None = 0

    def __post_init__(self) -> None:
        if self.kind not in ("deterministic", "randomized"):
            raise ValueError(f"unknown selection kind {self.kind!r}")

    def make_rng(self) -> random.Random | None:
        if self.kind == "randomized":
            return random.Random(self.rng_seed)
        return None


DETERMINISTIC = SelectionStrategy("deterministic", None)
RANDOMIZED = SelectionStrategy("randomized", 0)


def select_kth(
    elements: Sequence[Element],
    k: int,
    strategy: SelectionStrategy = RANDOMIZED,
    rng: random.Random | None = None,
    stats: Stats | None = None,
) -> Element:
    """Element of rank k (1-based) under the (value, index) order.

    Leaves `elements` untouched.  Pass `rng` to thread one generator through
    many calls (a tree does this so a single seed drives all of its splits);
    otherwise the strategy seeds a fresh one.
    """
    n = len(elements)
    if not 1 <= k <= n:
        raise ValueError(f"rank {k} out of range for {n} elements")
    if strategy.kind == "randomized":
        if rng is None:
            rng = strategy.make_rng()
        return _select_randomized(list(elements), k, rng, stats)
    return _select_deterministic(list(elements), k, stats)


def partition_stable(
    elements: Sequence[Element],
    x: Element,
    stats: Stats | None = None,
) -> tuple[list[Element], list[Element]]:
    """Split around threshold x, preserving input order on both sides.

    low gets every element <= x under the total order, high the rest.  When x
    is the element of rank ceil(m/2) of `elements`, tie-breaking guarantees
    len(low) == ceil(m/2) exactly.
    """
    low = [e for e in elements if e <= x]
    high = [e for e in elements if e > x]
    if stats is not None:
        stats.comparisons += 2 * len(elements)
    return low, high


def _insertion_sort(a: list) -> int:
    """Sort a small list in place; returns the number of comparisons made."""
    cmps = 0
    for i in range(1, len(a)):
        e = a[i]
        j = i - 1
        while j >= 0:
            cmps += 1
            if a[j] > e:
                a[j + 1] = a[j]
                j -= 1
            else:
                break
        a[j + 1] = e
    return cmps


def _small_select(a: list, k: int, stats: Stats | None):
    cmps = _insertion_sort(a)
    if stats is not None:
        stats.comparisons += cmps
    return a[k - 1]


def _select_randomized(a: list, k: int, rng: random.Random, stats: Stats | None):
    while len(a) > _SMALL_CUTOFF:
        x = a[rng.randrange(len(a))]
        low = [e for e in a if e < x]
        if stats is not None:
            stats.comparisons += len(a)
        if k <= len(low):
            a = low
            continue
        if k == len(low) + 1:
            return x
        high = [e for e in a if e > x]
        if stats is not None:
            stats.comparisons += len(a)
        k -= len(low) + 1
        a = high
    return _small_select(a, k, stats)


def _select_deterministic(a: list, k: int, stats: Stats | None):
    while len(a) > _SMALL_CUTOFF:
        medians = []
        cmps = 0
        for g in range(0, len(a), 5):
            group = a[g : g + 5]
            cmps += _insertion_sort(group)
            medians.append(group[(len(group) - 1) // 2])
        if stats is not None:
            stats.comparisons += cmps
        x = _select_deterministic(medians, (len(medians) + 1) // 2, stats)
        low = [e for e in a if e < x]
        if stats is not None:
            stats.comparisons += len(a)
        if k <= len(low):
            a = low
            continue
        if k == len(low) + 1:
            return x
        high = [e for e in a if e > x]
        if stats is not None:
            stats.comparisons += len(a)
        k -= len(low) + 1
        a = high
    return _small_select(a, k, stats)
