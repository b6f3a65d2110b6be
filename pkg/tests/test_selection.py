import random

import pytest
from hypothesis import given, strategies as st

from rangemedian.core import Element, Stats, as_elements
from rangemedian.selection import (
    DETERMINISTIC,
    RANDOMIZED,
    SelectionStrategy,
    partition_stable,
    select_kth,
)

FIG_ELEMS = as_elements([3, 7, 5.5, 4, 9, 6.2, 9, 4, 2, 5])


def test_fig_median_element():
    # rank ceil(10/2) = 5 of the example array is value 5 at position 10
    for strategy in (DETERMINISTIC, RANDOMIZED):
        assert select_kth(FIG_ELEMS, 5, strategy) == Element(5, 10)


def test_singleton():
    assert select_kth([Element(3, 1)], 1) == Element(3, 1)


def test_duplicate_values_tie_break():
    pair = [Element(9, 5), Element(9, 7)]
    assert select_kth(pair, 1) == Element(9, 5)
    assert select_kth(pair, 2) == Element(9, 7)


def test_rank_out_of_range():
    with pytest.raises(ValueError):
        select_kth(FIG_ELEMS, 0)
    with pytest.raises(ValueError):
        select_kth(FIG_ELEMS, 11)


def test_unknown_strategy_kind():
    with pytest.raises(ValueError):
        SelectionStrategy("quantum")


def test_randomized_reproducible():
    rng_a = SelectionStrategy("randomized", 123).make_rng()
    rng_b = SelectionStrategy("randomized", 123).make_rng()
    elems = as_elements([random.Random(5).random() for _ in range(200)])
    picks_a = [select_kth(elems, k, RANDOMIZED, rng=rng_a) for k in range(1, 201, 7)]
    picks_b = [select_kth(elems, k, RANDOMIZED, rng=rng_b) for k in range(1, 201, 7)]
    assert picks_a == picks_b


def test_agrees_with_sorted_oracle_bulk():
    # 10^4 random instances, both strategies, sizes up to 512
    rng = random.Random(0)
    sel_rng = RANDOMIZED.make_rng()
    for trial in range(10_000):
        n = rng.randint(1, 512)
        elems = as_elements([rng.randrange(64) for _ in range(n)])
        k = rng.randint(1, n)
        expect = sorted(elems)[k - 1]
        if trial % 2:
            got = select_kth(elems, k, DETERMINISTIC)
        else:
            got = select_kth(elems, k, RANDOMIZED, rng=sel_rng)
        assert got == expect


def test_deterministic_linear_comparison_bound():
    rng = random.Random(42)
    n = 100_000
    elems = as_elements([rng.random() for _ in range(n)])
    stats = Stats()
    select_kth(elems, n // 2, DETERMINISTIC, stats=stats)
    assert stats.comparisons <= 24 * n, stats.comparisons


def test_partition_fig_split():
    x = Element(5, 10)
    low, high = partition_stable(FIG_ELEMS, x)
    assert [e.value for e in low] == [3, 4, 4, 2, 5]
    assert [e.index for e in low] == [1, 4, 8, 9, 10]
    assert [e.value for e in high] == [7, 5.5, 9, 6.2, 9]
    assert [e.index for e in high] == [2, 3, 5, 6, 7]


def test_partition_all_equal_values():
    elems = [Element(4, 1), Element(4, 2)]
    low, high = partition_stable(elems, Element(4, 1))
    assert low == [Element(4, 1)] and high == [Element(4, 2)]


def test_partition_empty():
    assert partition_stable([], Element(0, 1)) == ([], [])


@given(st.lists(st.integers(0, 9), min_size=1, max_size=200), st.data())
def test_partition_round_trip_and_exact_half(vals, data):
    elems = as_elements(vals)
    k = data.draw(st.integers(1, len(elems)))
    x = select_kth(elems, k)
    low, high = partition_stable(elems, x)
    assert len(low) == k  # x has exact rank k, ties included below it
    assert sorted(low + high, key=lambda e: e.index) == elems
    # both halves preserve relative input order
    assert [e.index for e in low] == sorted(e.index for e in low)
    assert [e.index for e in high] == sorted(e.index for e in high)
