import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from rangemedian.cascade_tree import CascadeTree
from rangemedian.core import RangeQuery, as_elements, oracle_select
from rangemedian.selection import DETERMINISTIC

FIG_ARRAY = [3, 7, 5.5, 4, 9, 6.2, 9, 4, 2, 5]


def test_construction_is_lazy():
    tree = CascadeTree(FIG_ARRAY)
    assert tree.root.size == 10
    assert tree.root.low is None
    assert tree.stats.elements_partitioned == 0


def test_singleton_tree():
    tree = CascadeTree([42])
    e = tree.query(RangeQuery(1, 1))
    assert e.value == 42 and e.index == 1
    assert tree.stats.elements_partitioned == 0


def test_large_construction_does_no_partitioning():
    rng = random.Random(0)
    tree = CascadeTree([rng.random() for _ in range(1 << 16)])
    assert tree.stats.elements_partitioned == 0


def test_root_split_matches_fig():
    tree = CascadeTree(FIG_ARRAY)
    tree.split(tree.root)
    assert [e.value for e in tree.root.low.elems] == [3, 4, 4, 2, 5]
    assert [e.value for e in tree.root.high.elems] == [7, 5.5, 9, 6.2, 9]
    assert list(tree.root.low_pred) == [1, 1, 1, 2, 2, 2, 2, 3, 4, 5]
    # position j splits into j low + high predecessors
    assert [l + h for l, h in zip(tree.root.low_pred, tree.root.high_pred)] == list(
        range(1, 11)
    )
    assert tree.stats.splits_per_level == {0: 1}
    assert tree.stats.elements_partitioned == 10


def test_two_element_split():
    tree = CascadeTree([5, 1])
    tree.split(tree.root)
    assert tree.root.low.size == tree.root.high.size == 1
    assert tree.root.low.elems[0].value == 1


def test_fig_query_descends_high_with_rank_one():
    tree = CascadeTree(FIG_ARRAY)
    trace = []
    e = tree.query(RangeQuery(3, 8), trace=trace)
    assert (e.value, e.index) == (5.5, 3)
    size, posL, posR, p, l, r, m = trace[0]
    assert (size, p, m) == (10, 3, 2)
    assert (posR - posL) - m == 4  # high side of the root range
    assert trace[1][3] == 1  # continued with rank p - m = 1


def test_singleton_range():
    tree = CascadeTree(FIG_ARRAY)
    e = tree.query(RangeQuery(6, 6))
    assert e.value == 6.2 and e.index == 6


def test_random_queries_match_oracle():
    rng = random.Random(3)
    vals = [rng.randrange(500) for _ in range(1000)]
    elems = as_elements(vals)
    tree = CascadeTree(vals)
    for _ in range(1000):
        L = rng.randint(1, 1000)
        R = rng.randint(L, 1000)
        p = rng.randint(1, R - L + 1) if rng.random() < 0.5 else None
        q = RangeQuery(L, R, p)
        assert tree.query(q) == oracle_select(elems, q)


def test_cascade_indices_match_binary_search():
    rng = random.Random(4)
    vals = [rng.randrange(40) for _ in range(257)]
    tree = CascadeTree(vals)
    elems = as_elements(vals)
    for _ in range(300):
        L = rng.randint(1, 257)
        R = rng.randint(L, 257)
        q = RangeQuery(L, R)
        assert tree.query(q, check_cascade=True) == oracle_select(elems, q)


def test_deterministic_strategy_gives_same_answers():
    rng = random.Random(5)
    vals = [rng.randrange(64) for _ in range(300)]
    elems = as_elements(vals)
    tree = CascadeTree(vals, strategy=DETERMINISTIC)
    for _ in range(200):
        L = rng.randint(1, 300)
        R = rng.randint(L, 300)
        q = RangeQuery(L, R)
        assert tree.query(q) == oracle_select(elems, q)


def test_build_eager_exact_partition_count():
    rng = random.Random(6)
    tree = CascadeTree([rng.random() for _ in range(1024)])
    tree.build_eager()
    # power-of-two size: every one of the 10 levels partitions all 1024
    assert tree.stats.elements_partitioned == 1024 * 10
    assert tree.stats.splits_per_level == {j: 1 << j for j in range(10)}


def test_build_eager_singleton_no_splits():
    tree = CascadeTree([1])
    tree.build_eager()
    assert tree.stats.elements_partitioned == 0


def test_eager_queries_never_split_and_bounded_steps():
    rng = random.Random(7)
    n = 1024
    tree = CascadeTree([rng.random() for _ in range(n)])
    tree.build_eager()
    done = tree.stats.elements_partitioned
    limit = 2 * math.ceil(math.log2(n))
    for _ in range(200):
        L = rng.randint(1, n)
        R = rng.randint(L, n)
        before = tree.stats.cascade_steps
        tree.query(RangeQuery(L, R))
        assert tree.stats.cascade_steps - before <= limit
    assert tree.stats.elements_partitioned == done


def test_repeat_query_idempotent():
    tree = CascadeTree(FIG_ARRAY)
    q = RangeQuery(2, 9)
    first = tree.query(q)
    splits = tree.stats.total_splits()
    assert tree.query(q) == first
    assert tree.stats.total_splits() == splits


def test_lazy_amortization_bound():
    rng = random.Random(8)
    n = 4096
    for k in (1, 4, 16, 64, 256):
        tree = CascadeTree([rng.random() for _ in range(n)])
        for _ in range(k):
            L = rng.randint(1, n)
            tree.query(RangeQuery(L, rng.randint(L, n)))
        bound = n * (int(math.log2(k)) + 2) if k else 0
        assert tree.stats.elements_partitioned <= bound
        assert tree.stats.elements_partitioned <= n * math.ceil(math.log2(n))


def test_depth_bounded_by_ceil_log2():
    # exact halving keeps every path within [floor, ceil] of log2(n)
    for n in (2, 3, 5, 17, 100, 1000):
        rng = random.Random(n)
        tree = CascadeTree([rng.random() for _ in range(n)])
        for L in (1, n // 2 or 1, n):
            trace = []
            tree.query(RangeQuery(L, n, 1), trace=trace)
            assert math.floor(math.log2(n)) <= len(trace) <= tree.depth_limit()
            assert tree.depth_limit() == math.ceil(math.log2(n))


def test_rejects_empty_and_bad_queries():
    with pytest.raises(ValueError):
        CascadeTree([])
    tree = CascadeTree(FIG_ARRAY)
    with pytest.raises(ValueError):
        tree.query(RangeQuery(0, 5))
    with pytest.raises(ValueError):
        tree.query(RangeQuery(5, 11))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 7), min_size=1, max_size=64), st.data())
def test_arbitrary_ranks_match_oracle(vals, data):
    elems = as_elements(vals)
    tree = CascadeTree(vals)
    L = data.draw(st.integers(1, len(vals)))
    R = data.draw(st.integers(L, len(vals)))
    p = data.draw(st.integers(1, R - L + 1))
    q = RangeQuery(L, R, p)
    assert tree.query(q) == oracle_select(elems, q)
