"""Range rank and median queries over unsorted sequences.

Four interchangeable answers to "what is the element of rank p in A[L..R]?":
a sort-based oracle, a lazily built value-partition tree with cascaded
position indices, a succinct bitvector variant of the same tree, and a fully
dynamic structure over a mutable list.  A 2D median filter rides on the
dynamic variant.
"""

from .cascade_tree import CascadeNode, CascadeTree
from .compact_tree import CompactNode, CompactTree, SpaceReport
from .core import (
    Element,
    RangeQuery,
    Stats,
    as_elements,
    median_rank,
    oracle_select,
    total_cmp,
)
from .dynamic_rmp import (
    DynamicTree,
    ElementHandle,
    OrderIndex,
    PositionTree,
    build_from_values,
)
from .median_filter import GrayImage, filter_image, naive_filter, read_pgm, write_pgm
from .rank_bits import RankBitVector
from .selection import (
    DETERMINISTIC,
    RANDOMIZED,
    SelectionStrategy,
    partition_stable,
    select_kth,
)

__version__ = "0.1.0"

__all__ = [
    "CascadeNode",
    "CascadeTree",
    "CompactNode",
    "CompactTree",
    "DETERMINISTIC",
    "DynamicTree",
    "Element",
    "ElementHandle",
    "GrayImage",
    "OrderIndex",
    "PositionTree",
    "RANDOMIZED",
    "RangeQuery",
    "RankBitVector",
    "SelectionStrategy",
    "SpaceReport",
    "Stats",
    "as_elements",
    "build_from_values",
    "filter_image",
    "median_rank",
    "naive_filter",
    "oracle_select",
    "partition_stable",
    "read_pgm",
    "select_kth",
    "total_cmp",
    "write_pgm",
]
