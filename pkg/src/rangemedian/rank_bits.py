"""Bit vector with constant-time rank over prefixes.

Bits are packed into 64-bit words.  A sparse directory stores the cumulative
popcount at every multiple of the 512-bit block width, so rank1(i) is one
table lookup plus at most eight word popcounts.  The directory costs one word
per 512 bits, i.e. 64/512 = 12.5% of the payload, keeping total space at
m + o(m) bits.
"""

from __future__ import annotations

from typing import Iterable

BLOCK_BITS = 512
_WORDS_PER_BLOCK = BLOCK_BITS // 64

# shared by every vector shorter than one block (their directory is trivial)
_EMPTY_DIRECTORY = [0]


class RankBitVector:
    """Immutable bit sequence of length m answering rank1(i) for 0 <= i <= m.

    Positions are 1-based externally; rank1(i) counts the 1-bits among
    positions 1..i, with rank1(0) == 0 for the empty prefix.
    """

    __slots__ = ("m", "words", "block_ranks")

    def __init__(self, words: list[int], m: int):
        # words are little-endian within the vector: bit at position i+1 lives
        # at words[i >> 6], bit (i & 63); bits beyond m must be zero
        self.m = m
        self.words = words
        blocks = m // BLOCK_BITS
        if blocks == 0:
            self.block_ranks = _EMPTY_DIRECTORY
            return
        ranks = [0] * (blocks + 1)
        acc = 0
        w = 0
        for b in range(1, blocks + 1):
            stop = b * _WORDS_PER_BLOCK
            while w < stop:
                acc += words[w].bit_count()
                w += 1
            ranks[b] = acc
        self.block_ranks = ranks

    @classmethod
    def build(cls, bits: Iterable) -> "RankBitVector":
        """Pack an iterable of truthy/falsy flags in a single pass."""
        words: list[int] = []
        acc = 0
        shift = 0
        m = 0
        for bit in bits:
            if bit:
                acc |= 1 << shift
            shift += 1
            m += 1
            if shift == 64:
                words.append(acc)
                acc = 0
                shift = 0
        if shift:
            words.append(acc)
        return cls(words, m)

    def __len__(self) -> int:
        return self.m

    def rank1(self, i: int) -> int:
        """Number of 1-bits among positions 1..i."""
        if not 0 <= i <= self.m:
            raise ValueError(f"rank position {i} outside [0, {self.m}]")
        acc = self.block_ranks[i >> 9]
        w = (i >> 9) << 3
        stop = i >> 6
        words = self.words
        while w < stop:
            acc += words[w].bit_count()
            w += 1
        rem = i & 63
        if rem:
            acc += (words[stop] & ((1 << rem) - 1)).bit_count()
        return acc

    def bit(self, i: int) -> int:
        """The bit at 1-based position i."""
        if not 1 <= i <= self.m:
            raise ValueError(f"bit position {i} outside [1, {self.m}]")
        return (self.words[(i - 1) >> 6] >> ((i - 1) & 63)) & 1

    def ones(self) -> int:
        """Total population count."""
        return self.rank1(self.m)

    def directory_words(self) -> int:
        """Words held by the rank directory (0 for sub-block vectors)."""
        if self.block_ranks is _EMPTY_DIRECTORY:
            return 0
        return len(self.block_ranks)

    def aux_bits(self) -> int:
        """Auxiliary space in bits, beyond the m payload bits."""
        return 64 * self.directory_words()

    def storage_words(self) -> int:
        """Payload words (padded to whole words) plus directory words."""
        return len(self.words) + self.directory_words()
