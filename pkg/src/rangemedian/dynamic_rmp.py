"""Fully dynamic range rank queries over a mutable list.

Elements live in a linked list; a query range is a pair of element handles.
A weight-balanced binary tree keyed by value holds every live element, and
each of its nodes owns an order-statistic treap over the same elements keyed
by current list position, so "how many range members sit below this value
subtree" costs O(log n).  Since list positions shift under insertion, an
order-maintenance tag index supplies O(1) position comparison between any two
live handles.  When a primary node drifts out of weight balance, its whole
subtree (treaps included) is rebuilt from scratch; that happens rarely enough
to stay cheap amortized.
"""

from __future__ import annotations

import math
import random
from typing import Iterable

from .core import Stats, median_rank

_TAG_BITS = 62
_TAG_SPAN = 1 << _TAG_BITS
_RELABEL_T = 1.5


class ElementHandle:
    """Stable identity of one live list element.

    Doubles as the element's record in the order index: a doubly linked node
    carrying an integer tag whose order equals current list order.  Valid
    from insert until delete.
    """

    __slots__ = ("value", "seq", "key", "tag", "prev", "next", "alive", "owner")

    def __init__(self, value, seq: int):
        self.value = value
        self.seq = seq
        self.key = (value, seq)
        self.tag = 0
        self.prev = None
        self.next = None
        self.alive = False
        self.owner = None

    def __repr__(self) -> str:
        state = "live" if self.alive else "dead"
        return f"<ElementHandle value={self.value!r} seq={self.seq} {state}>"


class OrderIndex:
    """List-order maintenance: O(1) order comparison between live handles.

    Tags are integers in an open 62-bit universe.  Insertion takes the
    midpoint of the neighbouring tags; when no integer is left in the gap,
    the smallest tag-aligned neighbourhood that is sparse enough gets
    respaced evenly (the relative order of existing elements never changes,
    so structures keyed by *order* stay valid across respacing).
    """

    def __init__(self):
        self.head = ElementHandle(None, -1)
        self.tail = ElementHandle(None, -2)
        self.head.tag = 0
        self.tail.tag = _TAG_SPAN
        self.head.next = self.tail
        self.tail.prev = self.head
        self.size = 0
        self.relabels = 0

    def insert_after(self, after: ElementHandle | None, h: ElementHandle) -> None:
        """Link h after `after` (None means the front of the list)."""
        left = self.head if after is None else after
        if left.next.tag - left.tag < 2:
            self._respace(left if left is not self.head else left.next)
        right = left.next
        h.tag = (left.tag + right.tag) >> 1
        h.prev = left
        h.next = right
        left.next = h
        right.prev = h
        h.alive = True
        self.size += 1

    def delete(self, h: ElementHandle) -> None:
        h.prev.next = h.next
        h.next.prev = h.prev
        h.prev = None
        h.next = None
        h.alive = False
        self.size -= 1

    def compare(self, a: ElementHandle, b: ElementHandle) -> int:
        """-1, 0 or 1 as a precedes, is, or follows b in the list."""
        if a is b:
            return 0
        return -1 if a.tag < b.tag else 1

    def _respace(self, anchor: ElementHandle) -> None:
        # grow tag-aligned windows around the anchor until the density allows
        # even respacing with gaps of at least 2
        level = 3
        while level <= _TAG_BITS:
            span = 1 << level
            lo = anchor.tag & -span
            hi = lo + span
            first = anchor
            count = 1
            node = anchor.prev
            while node is not self.head and node.tag >= lo:
                first = node
                count += 1
                node = node.prev
            node = anchor.next
            while node is not self.tail and node.tag < hi:
                count += 1
                node = node.next
            step = span // (count + 1)
            if count < (2.0 / _RELABEL_T) ** level and step >= 2:
                tag = lo + step
                node = first
                for _ in range(count):
                    node.tag = tag
                    tag += step
                    node = node.next
                self.relabels += 1
                return
            level += 1
        raise RuntimeError("order index tag universe exhausted")


class _SecNode:
    __slots__ = ("h", "pri", "size", "left", "right")

    def __init__(self, h: ElementHandle, pri: float):
        self.h = h
        self.pri = pri
        self.size = 1
        self.left = None
        self.right = None


def _upd(n: _SecNode) -> None:
    n.size = 1 + (n.left.size if n.left is not None else 0) + (
        n.right.size if n.right is not None else 0
    )


def _sec_insert(root, node, stats: Stats):
    if root is None:
        return node
    tag = node.h.tag
    path = [root]
    cur = root.left if tag < root.h.tag else root.right
    while cur is not None:
        path.append(cur)
        cur = cur.left if tag < cur.h.tag else cur.right
    stats.comparisons += len(path)
    parent = path[-1]
    if tag < parent.h.tag:
        parent.left = node
    else:
        parent.right = node
    # bubble the new node up while its priority beats its parent's
    pri = node.pri
    i = len(path) - 1
    while i >= 0 and path[i].pri < pri:
        p = path[i]
        if p.left is node:
            p.left = node.right
            node.right = p
        else:
            p.right = node.left
            node.left = p
        _upd(p)
        _upd(node)
        gp = path[i - 1] if i > 0 else None
        if gp is None:
            root = node
        elif gp.left is p:
            gp.left = node
        else:
            gp.right = node
        i -= 1
    while i >= 0:
        path[i].size += 1
        i -= 1
    return root


def _sec_delete(root, h: ElementHandle, stats: Stats):
    tag = h.tag
    path = []
    cur = root
    while cur is not None and cur.h is not h:
        path.append(cur)
        cur = cur.left if tag < cur.h.tag else cur.right
    stats.comparisons += len(path)
    if cur is None:
        raise KeyError("handle missing from position tree")
    target = cur
    # rotate the doomed node down until it can be spliced out
    while target.left is not None and target.right is not None:
        if target.left.pri > target.right.pri:
            repl = target.left
            target.left = repl.right
            repl.right = target
        else:
            repl = target.right
            target.right = repl.left
            repl.left = target
        if path:
            p = path[-1]
            if p.left is target:
                p.left = repl
            else:
                p.right = repl
        else:
            root = repl
        path.append(repl)
    child = target.left if target.left is not None else target.right
    if path:
        p = path[-1]
        if p.left is target:
            p.left = child
        else:
            p.right = child
    else:
        root = child
    for node in reversed(path):
        _upd(node)
    return root


def _sec_count_leq(root, tag: int, stats: Stats) -> int:
    acc = 0
    steps = 0
    node = root
    while node is not None:
        steps += 1
        if node.h.tag <= tag:
            acc += (node.left.size if node.left is not None else 0) + 1
            node = node.right
        else:
            node = node.left
    stats.comparisons += steps
    return acc


def _sec_from_ordered(handles, rng: random.Random):
    # stack-based Cartesian construction: linear time, genuine random-priority
    # treap shape; sizes are folded in as subtrees finalize
    rand = rng.random
    if len(handles) == 1:
        return _SecNode(handles[0], rand())
    spine = []
    for h in handles:
        node = _SecNode(h, rand())
        last = None
        while spine and spine[-1].pri < node.pri:
            p = spine.pop()
            if last is not None:
                p.size += last.size  # p.right chain is now final
            last = p
        if last is not None:
            node.left = last
            node.size = 1 + last.size
        if spine:
            spine[-1].right = node
        spine.append(node)
    if not spine:
        return None
    for i in range(len(spine) - 1, 0, -1):  # fold the remaining right spine
        spine[i - 1].size += spine[i].size
    return spine[0]


def _sec_inorder(root, out: list) -> None:
    stack = []
    node = root
    while stack or node is not None:
        while node is not None:
            stack.append(node)
            node = node.left
        node = stack.pop()
        out.append(node.h)
        node = node.right


class PositionTree:
    """Order-statistic treap over handles in current list order.

    Keys are compared through the handles' order tags at access time, so the
    tree stays valid when the order index respaces tags (respacing preserves
    relative order).  Subtree sizes make counting within a handle range
    O(log n).
    """

    __slots__ = ("root", "_rng", "stats")

    def __init__(self, rng: random.Random, stats: Stats):
        self.root = None
        self._rng = rng
        self.stats = stats

    @classmethod
    def from_ordered(cls, handles, rng: random.Random, stats: Stats) -> "PositionTree":
        """Build from handles already sorted by list order; linear time."""
        t = cls(rng, stats)
        t.root = _sec_from_ordered(handles, rng)
        return t

    @property
    def size(self) -> int:
        return self.root.size if self.root is not None else 0

    def insert(self, h: ElementHandle) -> None:
        self.root = _sec_insert(self.root, _SecNode(h, self._rng.random()), self.stats)

    def delete(self, h: ElementHandle) -> None:
        self.root = _sec_delete(self.root, h, self.stats)

    def count_leq(self, tag: int) -> int:
        return _sec_count_leq(self.root, tag, self.stats)

    def count_in_range(self, from_h: ElementHandle, to_h: ElementHandle) -> int:
        """How many stored elements lie between the two handles, inclusive."""
        return self.count_leq(to_h.tag) - self.count_leq(from_h.tag - 1)

    def inorder(self) -> list[ElementHandle]:
        out: list[ElementHandle] = []
        _sec_inorder(self.root, out)
        return out


class _PrimaryNode:
    __slots__ = ("h", "left", "right", "weight", "sec")

    def __init__(self, h: ElementHandle):
        self.h = h
        self.left = None
        self.right = None
        self.weight = 1
        self.sec: PositionTree | None = None


class DynamicTree:
    """Mutable element list supporting range-rank queries between handles.

    insert/delete cost O(log^2 n) amortized (every value-tree node on the
    search path updates its position treap, plus occasional subtree
    rebuilds); queries cost O(log^2 n) worst case.  Single writer; queries
    may run concurrently with each other between mutations.
    """

    def __init__(self, alpha: float = 0.25, seed: int = 0, stats: Stats | None = None):
        if not 0.0 < alpha < 0.5:
            raise ValueError(f"alpha must be in (0, 0.5), got {alpha}")
        self.alpha = alpha
        self.order = OrderIndex()
        self.root: _PrimaryNode | None = None
        self.stats = stats if stats is not None else Stats()
        self._rng = random.Random(seed)
        self._seq = 0
        self.size = 0

    # -- mutation ---------------------------------------------------------

    def insert(self, after: ElementHandle | None, value) -> ElementHandle:
        """Insert value after the given handle (None: front of the list)."""
        if after is not None:
            self._require_live(after)
        if isinstance(value, float) and math.isnan(value):
            raise ValueError("NaN values are not admitted")
        h = ElementHandle(value, self._seq)
        h.owner = self
        self._seq += 1
        self.order.insert_after(after, h)
        self.size += 1
        if self.root is None:
            self.root = self._new_node(h)
            return h
        key = h.key
        stats = self.stats
        rand = self._rng.random
        path = []
        node = self.root
        steps = 0
        while True:
            path.append(node)
            node.weight += 1
            sec = node.sec
            sec.root = _sec_insert(sec.root, _SecNode(h, rand()), stats)
            steps += 1
            if key < node.h.key:
                if node.left is None:
                    node.left = self._new_node(h)
                    break
                node = node.left
            else:
                if node.right is None:
                    node.right = self._new_node(h)
                    break
                node = node.right
        stats.comparisons += steps
        self._rebalance(path)
        return h

    def delete(self, h: ElementHandle) -> None:
        """Remove the element; the handle is dead afterwards."""
        self._require_live(h)
        key = h.key
        stats = self.stats
        path = []
        node = self.root
        steps = 0
        while node is not None and node.h is not h:
            path.append(node)
            node.weight -= 1
            sec = node.sec
            sec.root = _sec_delete(sec.root, h, stats)
            steps += 1
            node = node.left if key < node.h.key else node.right
        stats.comparisons += steps
        if node is None:
            raise RuntimeError("handle not present in its own tree (corrupt)")
        ne = node
        ne.weight -= 1
        ne.sec.delete(h)
        chain = path + [ne]
        if ne.left is None or ne.right is None:
            repl = ne.left if ne.left is not None else ne.right
            self._replace_child(path[-1] if path else None, ne, repl)
            chain = path
        else:
            # pull the in-order successor up into ne's slot; every node
            # strictly between them loses the successor from its subtree
            below = []
            succ = ne.right
            while succ.left is not None:
                below.append(succ)
                succ = succ.left
            s = succ.h
            for v in below:
                v.weight -= 1
                v.sec.delete(s)
            if below:
                below[-1].left = succ.right
            else:
                ne.right = succ.right
            ne.h = s
            chain = chain + below
        self.order.delete(h)
        h.owner = None
        self.size -= 1
        self._rebalance(chain)

    # -- queries ----------------------------------------------------------

    def query(self, from_h: ElementHandle, to_h: ElementHandle, p: int | None = None):
        """Value of rank p (default: lower median) between the two handles.

        Endpoints are inclusive and must be given in list order; reversed
        endpoints are an error, not silently swapped.
        """
        self._require_live(from_h)
        self._require_live(to_h)
        if self.order.compare(from_h, to_h) > 0:
            raise ValueError("query endpoints reversed (from comes after to)")
        a = from_h.tag - 1
        b = to_h.tag
        stats = self.stats
        total = _sec_count_leq(self.root.sec.root, b, stats) - _sec_count_leq(
            self.root.sec.root, a, stats
        )
        if p is None:
            p = median_rank(total)
        elif not 1 <= p <= total:
            raise ValueError(f"rank {p} out of range for {total} elements")
        node = self.root
        while node is not None:
            left = node.left
            if left is not None:
                sec = left.sec.root
                in_left = _sec_count_leq(sec, b, stats) - _sec_count_leq(sec, a, stats)
            else:
                in_left = 0
            if p <= in_left:
                node = left
                continue
            p -= in_left
            if a < node.h.tag <= b:
                if p == 1:
                    return node.h.value
                p -= 1
            node = node.right
        raise AssertionError("descent fell off the tree (corrupt structure)")

    def count_in_range(self, from_h: ElementHandle, to_h: ElementHandle) -> int:
        """Number of live elements between the two handles, inclusive."""
        self._require_live(from_h)
        self._require_live(to_h)
        if self.order.compare(from_h, to_h) > 0:
            raise ValueError("endpoints reversed")
        if self.root is None:
            return 0
        return self.root.sec.count_in_range(from_h, to_h)

    # -- internals --------------------------------------------------------

    def _new_node(self, h: ElementHandle) -> _PrimaryNode:
        node = _PrimaryNode(h)
        node.sec = PositionTree.from_ordered([h], self._rng, self.stats)
        return node

    def _require_live(self, h) -> None:
        if not isinstance(h, ElementHandle) or not h.alive:
            raise ValueError(f"dead or foreign handle: {h!r}")
        if h.owner is not self:
            raise ValueError("handle belongs to a different structure")

    def _is_balanced(self, node: _PrimaryNode) -> bool:
        wl = node.left.weight if node.left is not None else 0
        wr = node.right.weight if node.right is not None else 0
        return min(wl, wr) + 1 >= self.alpha * node.weight

    def _replace_child(self, parent, old, new) -> None:
        if parent is None:
            self.root = new
        elif parent.left is old:
            parent.left = new
        else:
            parent.right = new

    def _rebalance(self, chain) -> None:
        # chain is a root-down parent/child path; rebuilding the highest
        # unbalanced node restores balance everywhere below it
        alpha = self.alpha
        for i, node in enumerate(chain):
            left = node.left
            right = node.right
            wl = left.weight if left is not None else 0
            wr = right.weight if right is not None else 0
            if (wl if wl < wr else wr) + 1 < alpha * node.weight:
                rebuilt = self._rebuild(node)
                self._replace_child(chain[i - 1] if i > 0 else None, node, rebuilt)
                return

    def _rebuild(self, node: _PrimaryNode) -> _PrimaryNode:
        by_key: list[ElementHandle] = []
        stack = []
        cur = node
        while stack or cur is not None:
            while cur is not None:
                stack.append(cur)
                cur = cur.left
            cur = stack.pop()
            by_key.append(cur.h)
            cur = cur.right
        by_pos = node.sec.inorder()
        self.stats.rebuild_elements += len(by_key)
        rank = {h: i for i, h in enumerate(by_key)}
        return self._build_perfect(by_key, 0, len(by_key) - 1, by_pos, rank)

    def _build_perfect(self, keys, lo, hi, by_pos, rank):
        if lo > hi:
            return None
        mid = (lo + hi) // 2
        node = _PrimaryNode(keys[mid])
        node.weight = hi - lo + 1
        node.sec = PositionTree.from_ordered(by_pos, self._rng, self.stats)
        if lo == hi:
            return node
        left_pos = [h for h in by_pos if rank[h] < mid]
        right_pos = [h for h in by_pos if rank[h] > mid]
        node.left = self._build_perfect(keys, lo, mid - 1, left_pos, rank)
        node.right = self._build_perfect(keys, mid + 1, hi, right_pos, rank)
        return node

    # -- debug ------------------------------------------------------------

    def audit(self) -> None:
        """Full structural self-check; raises AssertionError on any breach.

        Verifies weights, the weight-balance invariant, treap size fields and
        heap order, agreement between every primary subtree and its position
        treap, and tag order inside the treaps.  Intended for tests; cost is
        O(n log n).
        """
        if self.root is None:
            assert self.size == 0
            return

        def walk(node) -> list[ElementHandle]:
            left = walk(node.left) if node.left is not None else []
            right = walk(node.right) if node.right is not None else []
            subtree = left + [node.h] + right
            assert node.weight == len(subtree), "stale weight"
            assert self._is_balanced(node), "weight balance violated"
            sec = node.sec.inorder()
            assert len(sec) == node.sec.size == len(subtree), "stale treap size"
            assert {id(h) for h in sec} == {id(h) for h in subtree}, (
                "treap contents diverge from primary subtree"
            )
            tags = [h.tag for h in sec]
            assert tags == sorted(tags) and len(set(tags)) == len(tags), (
                "treap order broken"
            )
            _audit_sec(node.sec.root)
            return subtree

        all_elems = walk(self.root)
        assert len(all_elems) == self.size
        keys = [h.key for h in all_elems]
        assert keys == sorted(keys), "primary key order broken"


def _audit_sec(root) -> None:
    if root is None:
        return
    lsize = root.left.size if root.left is not None else 0
    rsize = root.right.size if root.right is not None else 0
    assert root.size == lsize + rsize + 1, "treap size field wrong"
    if root.left is not None:
        assert root.left.pri <= root.pri, "treap heap order broken"
        _audit_sec(root.left)
    if root.right is not None:
        assert root.right.pri <= root.pri, "treap heap order broken"
        _audit_sec(root.right)


def build_from_values(values: Iterable, **kwargs) -> tuple[DynamicTree, list[ElementHandle]]:
    """Convenience: insert values left to right; returns (tree, handles)."""
    tree = DynamicTree(**kwargs)
    handles = []
    last = None
    for v in values:
        last = tree.insert(last, v)
        handles.append(last)
    return tree, handles
