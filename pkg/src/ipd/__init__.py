"""Interval-partition diffusions: exact samplers, path constructions and
verification statistics for the two-parameter family."""

from ipd._fast import BACKEND, HAS_NUMBA
from ipd.core import (
    AnnotatedPartition,
    BlockOutsideRange,
    GeneralizedIntervalPartition,
    IntervalPartition,
    NegativeLength,
    OverlappingBlocks,
    PartitionError,
    concat,
    diversity_estimate,
    empty_partition,
    make_partition,
    ranked,
    reverse,
    scale,
)

__version__ = "1.0.0"
