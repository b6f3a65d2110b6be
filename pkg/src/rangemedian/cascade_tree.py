"""Lazily split value-partition tree with cascaded position indices.

Every node keeps its elements ordered by original array position.  Splitting
a node hands the ceil(m/2) smallest values (under the tie-broken order) to
the low child and the rest to the high child, and records for every position
j the number of low / high elements among the node's first j elements.  A
query can therefore translate its two boundary positions into child positions
in O(1) per level instead of binary searching, after the one-time O(m) split
cost.  Nothing is split until a query actually needs it.
"""

from __future__ import annotations

from array import array
from bisect import bisect_right
from typing import Sequence

from .core import Element, RangeQuery, Stats, as_elements, median_rank
from .selection import RANDOMIZED, SelectionStrategy, partition_stable, select_kth


class CascadeNode:
    """One node: elements in position order plus per-position child indices.

    low_pred[j-1] is the position, within the low child, of the last low
    element whose original index is <= the original index of this node's j-th
    element (0 when there is none); high_pred is the same for the high child.
    Both are filled at split time; unsplit nodes have no children and no
    index arrays.
    """

    __slots__ = ("elems", "level", "low", "high", "low_pred", "high_pred")

    def __init__(self, elems: list[Element], level: int):
        self.elems = elems
        self.level = level
        self.low: CascadeNode | None = None
        self.high: CascadeNode | None = None
        self.low_pred: array | None = None
        self.high_pred: array | None = None

    @property
    def size(self) -> int:
        return len(self.elems)


class CascadeTree:
    """Online range-rank queries; splits are paid only along queried paths.

    The root holds all n elements in input order, so a root position lookup
    is the identity and no binary search happens anywhere.  Queries mutate
    the tree (lazy splits), so while lazy it needs exclusive access; after
    build_eager it is read-only and safe to share.
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
        self.root = CascadeNode(elems, 0)
        self.strategy = strategy
        self.stats = stats if stats is not None else Stats()
        self._rng = strategy.make_rng()

    def split(self, node: CascadeNode) -> None:
        """Materialize node's children and their position index arrays."""
        elems = node.elems
        m = len(elems)
        x = select_kth(elems, median_rank(m), self.strategy, rng=self._rng, stats=self.stats)
        low, high = partition_stable(elems, x, stats=self.stats)
        low_pred = array("I")
        high_pred = array("I")
        lp_append = low_pred.append
        hp_append = high_pred.append
        # low is a subsequence of elems (same objects), so one identity-based
        # merge pass recovers membership without further value comparisons
        li = 0
        nl = len(low)
        pos = 0
        for e in elems:
            pos += 1
            if li < nl and low[li] is e:
                li += 1
            lp_append(li)
            hp_append(pos - li)
        node.low_pred = low_pred
        node.high_pred = high_pred
        node.low = CascadeNode(low, node.level + 1)
        node.high = CascadeNode(high, node.level + 1)
        self.stats.record_split(node.level, m)

    def query(
        self,
        q: RangeQuery,
        check_cascade: bool = False,
        trace: list | None = None,
    ) -> Element:
        """Element of rank q.p (default: lower median) within A[L..R].

        Splits any unsplit node it passes through.  With check_cascade the
        cascaded positions are re-derived by binary search at every level and
        must agree (debug mode).  `trace`, if given, receives one
        (size, posL, posR, p, l, r, m) tuple per internal node visited.
        """
        q.validate(self.n)
        p = q.rank()
        node = self.root
        posL = q.L - 1
        posR = q.R
        stats = self.stats
        while len(node.elems) > 1:
            if node.low is None:
                self.split(node)
            lp = node.low_pred
            l = lp[posL - 1] if posL else 0
            r = lp[posR - 1]
            stats.cascade_steps += 2
            m = r - l
            if trace is not None:
                trace.append((len(node.elems), posL, posR, p, l, r, m))
            if check_cascade:
                self._verify_positions(node, q, posL, posR, l, r)
            if p <= m:
                node = node.low
                posL = l
                posR = r
            else:
                p -= m
                hp = node.high_pred
                posL = hp[posL - 1] if posL else 0
                posR = hp[posR - 1]
                node = node.high
        return node.elems[0]

    def _verify_positions(self, node, q, posL, posR, l, r):
        # the search key never changes during the descent, so the cascaded
        # values must match a from-scratch binary search on the child
        low = node.low.elems
        l_bs = bisect_right(low, q.L - 1, key=lambda e: e.index)
        r_bs = bisect_right(low, q.R, key=lambda e: e.index)
        if (l_bs, r_bs) != (l, r):
            raise AssertionError(
                f"cascade mismatch at level {node.level}: "
                f"indices gave ({l}, {r}), binary search gave ({l_bs}, {r_bs})"
            )

    def build_eager(self) -> None:
        """Split everything down to singletons; queries then never split."""
        stack = [self.root]
        while stack:
            node = stack.pop()
            if len(node.elems) < 2:
                continue
            if node.low is None:
                self.split(node)
            stack.append(node.low)
            stack.append(node.high)

    def depth_limit(self) -> int:
        """Max internal nodes on any root-to-leaf path: ceil(log2 n)."""
        return (self.n - 1).bit_length() if self.n > 1 else 0
