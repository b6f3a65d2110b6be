import random

import pytest
from hypothesis import given, settings, strategies as st

from rangemedian.rank_bits import BLOCK_BITS, RankBitVector


def test_small_vector():
    bv = RankBitVector.build([1, 0, 1, 1, 0])
    assert bv.ones() == 3
    assert bv.rank1(3) == 2
    assert [bv.bit(i) for i in range(1, 6)] == [1, 0, 1, 1, 0]


def test_empty_vector():
    bv = RankBitVector.build([])
    assert len(bv) == 0
    assert bv.rank1(0) == 0


def test_rank_of_empty_prefix():
    bv = RankBitVector.build([1, 1, 1])
    assert bv.rank1(0) == 0


def test_million_random_bits_total():
    rng = random.Random(0)
    bits = [rng.random() < 0.37 for _ in range(10**6)]
    bv = RankBitVector.build(bits)
    assert bv.rank1(len(bits)) == sum(bits)


def test_all_positions_match_prefix_sums():
    rng = random.Random(1)
    bits = [rng.random() < 0.5 for _ in range(4096)]
    bv = RankBitVector.build(bits)
    acc = 0
    for i, b in enumerate(bits, start=1):
        acc += b
        assert bv.rank1(i) == acc
    assert bv.rank1(0) == 0


def test_position_out_of_range():
    bv = RankBitVector.build([1, 0])
    with pytest.raises(ValueError):
        bv.rank1(3)
    with pytest.raises(ValueError):
        bv.rank1(-1)
    with pytest.raises(ValueError):
        bv.bit(0)
    with pytest.raises(ValueError):
        bv.bit(3)


@settings(max_examples=50)
@given(st.lists(st.booleans(), max_size=1500))
def test_rank_delta_is_the_bit(bits):
    bv = RankBitVector.build(bits)
    prev = 0
    for i in range(1, len(bits) + 1):
        cur = bv.rank1(i)
        assert cur - prev == bv.bit(i) == int(bits[i - 1])
        assert cur >= prev
        prev = cur
    assert prev == sum(bits)


def test_word_boundary_ranks():
    # exercise positions straddling word and block boundaries
    m = 3 * BLOCK_BITS + 17
    rng = random.Random(2)
    bits = [rng.random() < 0.5 for _ in range(m)]
    bv = RankBitVector.build(bits)
    for i in (63, 64, 65, 511, 512, 513, 1024, m - 1, m):
        assert bv.rank1(i) == sum(bits[:i])


def test_auxiliary_space_bound():
    for m in (4096, 10_000, 1 << 16):
        bv = RankBitVector.build([1] * m)
        assert bv.aux_bits() <= 0.5 * m


def test_sub_block_vectors_share_trivial_directory():
    a = RankBitVector.build([1] * 100)
    b = RankBitVector.build([0] * 200)
    assert a.directory_words() == b.directory_words() == 0
    assert a.block_ranks is b.block_ranks
