"""Linear-space variant of the value-partition tree.

Same tree shape as the pointer variant, but an internal node keeps only a bit
vector over its *local* positions (bit i set iff the node's i-th element goes
to the low child).  Query coordinates are contracted to child-local ranges at
every level via two rank lookups, so every level of the whole tree stores
exactly n bits in total.  Original indices survive only in the leaves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .core import Element, RangeQuery, Stats, as_elements, median_rank
from .rank_bits import RankBitVector
from .selection import RANDOMIZED, SelectionStrategy, select_kth


class CompactNode:
    """One node: either an unsplit value sequence or a rank bit vector.

    While unsplit, `values` holds the node's (value, index) pairs in position
    order.  Splitting replaces them with `lowbits` and hands the partitioned
    subsequences to the children; a singleton node keeps its single pair
    forever as the leaf payload.
    """

    __slots__ = ("values", "size", "level", "lowbits", "low", "high")

    def __init__(self, values: list[Element], level: int):
        self.values: list[Element] | None = values
        self.size = len(values)
        self.level = level
        self.lowbits: RankBitVector | None = None
        self.low: CompactNode | None = None
        self.high: CompactNode | None = None


@dataclass
class LevelSpace:
    """Exact space accounting for one tree level."""

    nodes: int = 0
    payload_bits: int = 0
    bit_words: int = 0
    rank_dir_words: int = 0
    pending_value_words: int = 0
    leaf_payload_words: int = 0


@dataclass
class SpaceReport:
    """Per-level and total space usage of a (possibly partially built) tree.

    payload bits are counted exactly (m bits per split node); words count
    what is actually stored: padded bit words, rank directory entries, two
    words per leaf for (value, original index), and two words per element
    still waiting in unsplit nodes.
    """

    n: int
    levels: dict[int, LevelSpace] = field(default_factory=dict)

    def level(self, j: int) -> LevelSpace:
        if j not in self.levels:
            self.levels[j] = LevelSpace()
        return self.levels[j]

    @property
    def total_payload_bits(self) -> int:
        return sum(s.payload_bits for s in self.levels.values())

    @property
    def total_words(self) -> int:
        return sum(
            s.bit_words + s.rank_dir_words + s.pending_value_words + s.leaf_payload_words
            for s in self.levels.values()
        )

    @property
    def words_per_element(self) -> float:
        return self.total_words / self.n


class CompactTree:
    """Online range-rank queries in O(n) words of structure space.

    Same access contract as the pointer variant: exclusive access while lazy,
    freely shared once fully built.
    """

    def __init__(
        self,
        values: Sequence,
        strategy: SelectionStrategy = RANDOMIZED,
        stats: Stats | None = None,
    ):
        elems = (
            list(values)
            if len(values) > 0 and isinstance(values[0], Element)
            else as_elements(values)
        )
        self.n = len(elems)
        self.root = CompactNode(elems, 0)
        self.strategy = strategy
        self.stats = stats if stats is not None else Stats()
        self._rng = strategy.make_rng()

    def split(self, node: CompactNode) -> None:
        """Build the node's bit vector and children, then drop its values."""
        vals = node.values
        m = node.size
        x = select_kth(vals, median_rank(m), self.strategy, rng=self._rng, stats=self.stats)
        low: list[Element] = []
        high: list[Element] = []
        low_append = low.append
        high_append = high.append
        words: list[int] = []
        words_append = words.append
        # chunked by word so the bit cursor needs no wrap check
        for base in range(0, m, 64):
            acc = 0
            bit = 1
            for e in vals[base : base + 64]:
                if e <= x:
                    low_append(e)
                    acc |= bit
                else:
                    high_append(e)
                bit += bit
            words_append(acc)
        self.stats.comparisons += m
        node.lowbits = RankBitVector(words, m)
        node.low = CompactNode(low, node.level + 1)
        node.high = CompactNode(high, node.level + 1)
        node.values = None  # internal nodes hold only bits
        self.stats.record_split(node.level, m)

    def query(
        self,
        q: RangeQuery,
        check_ranges: bool = False,
        trace: list | None = None,
    ) -> Element:
        """(value, original index) of rank q.p within A[L..R].

        The descent keeps (L, R, p) in node-local coordinates.  check_ranges
        asserts the local invariants 1 <= L <= R <= size and 1 <= p <= R-L+1
        at every node (debug mode).  `trace`, if given, receives one
        (size, L, R, p, l, r, m) tuple per internal node visited.
        """
        q.validate(self.n)
        node = self.root
        L = q.L
        R = q.R
        p = q.rank()
        stats = self.stats
        while node.size > 1:
            if check_ranges:
                assert 1 <= L <= R <= node.size, (L, R, node.size)
                assert 1 <= p <= R - L + 1, (L, R, p)
            if node.lowbits is None:
                self.split(node)
            bv = node.lowbits
            l = bv.rank1(L - 1)
            r = bv.rank1(R)
            stats.cascade_steps += 2
            m = r - l
            if trace is not None:
                trace.append((node.size, L, R, p, l, r, m))
            if p <= m:
                node = node.low
                L = l + 1
                R = r
            else:
                node = node.high
                L -= l
                R -= r
                p -= m
        if check_ranges:
            assert L == R == 1 and p == 1, (L, R, p)
        return node.values[0]

    def build_eager(self) -> None:
        """Split everything down to singletons."""
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.size < 2:
                continue
            if node.lowbits is None:
                self.split(node)
            stack.append(node.low)
            stack.append(node.high)

    def space_report(self) -> SpaceReport:
        """Exact accounting of every materialized node, grouped by level."""
        report = SpaceReport(self.n)
        stack = [self.root]
        while stack:
            node = stack.pop()
            s = report.level(node.level)
            s.nodes += 1
            if node.lowbits is not None:
                s.payload_bits += node.lowbits.m
                s.bit_words += len(node.lowbits.words)
                s.rank_dir_words += node.lowbits.directory_words()
                stack.append(node.low)
                stack.append(node.high)
            elif node.size == 1:
                s.leaf_payload_words += 2
            else:
                s.pending_value_words += 2 * node.size
        return report

    def depth_limit(self) -> int:
        """Max internal nodes on any root-to-leaf path: ceil(log2 n)."""
        return (self.n - 1).bit_length() if self.n > 1 else 0
