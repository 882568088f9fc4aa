"""Ordered interval partitions of [0, M], with optional dust and diversity marks.

A partition is a finite ordered collection of disjoint open blocks (a, b) inside
[0, M]. The part of [0, M] not covered by blocks is dust; dust-free partitions
get the stricter IntervalPartition type. Values are immutable and safe to share.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma as _gamma_fn

MASS_TOL = 1e-12   # dust at or below this (scaled) counts as zero
MIN_BLOCK = 1e-15  # blocks must be longer than this


class PartitionError(ValueError):
    """Base class for partition construction and manipulation errors."""


class OverlappingBlocks(PartitionError):
    pass


class NegativeLength(PartitionError):
    pass


class BlockOutsideRange(PartitionError):
    pass


class NonPositiveScale(PartitionError):
    pass


class AlphaOutOfRange(PartitionError):
    pass


def _freeze(a) -> np.ndarray:
    out = np.ascontiguousarray(a, dtype=np.float64)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class GeneralizedIntervalPartition:
    """Blocks plus a total mass that may exceed the block total.

    Attributes
    ----------
    lefts, rights : float arrays, block endpoints in increasing order
    mass : total mass M; ``mass - lengths.sum()`` is the dust
    """

    lefts: np.ndarray
    rights: np.ndarray
    mass: float

    @property
    def n_blocks(self) -> int:
        return len(self.lefts)

    @property
    def lengths(self) -> np.ndarray:
        return self.rights - self.lefts

    @property
    def block_mass(self) -> float:
        return float(np.sum(self.rights) - np.sum(self.lefts))

    @property
    def dust_mass(self) -> float:
        return max(0.0, self.mass - self.block_mass)

    def blocks(self) -> list[tuple[float, float]]:
        return list(zip(self.lefts.tolist(), self.rights.tolist()))

    def is_strict(self) -> bool:
        return self.mass - self.block_mass <= MASS_TOL * max(1.0, self.mass)

    def __eq__(self, other):
        if not isinstance(other, GeneralizedIntervalPartition):
            return NotImplemented
        return (
            self.mass == other.mass
            and np.array_equal(self.lefts, other.lefts)
            and np.array_equal(self.rights, other.rights)
        )

    def __hash__(self):
        return hash((self.mass, self.lefts.tobytes(), self.rights.tobytes()))

    def __repr__(self):
        kind = type(self).__name__
        return f"{kind}({self.n_blocks} blocks, mass={self.mass:.6g}, dust={self.dust_mass:.3g})"


class IntervalPartition(GeneralizedIntervalPartition):
    """A partition whose blocks cover [0, M] up to a Lebesgue-null set."""


@dataclass(frozen=True, eq=False)
class AnnotatedPartition:
    """An interval partition together with left-diversity marks.

    block_diversity[k] estimates the diversity of everything strictly left of
    block k; total_diversity estimates the diversity of the whole partition.
    Marks are non-decreasing along the block order and bounded by the total.
    """

    partition: GeneralizedIntervalPartition
    block_diversity: np.ndarray
    total_diversity: float

    def __post_init__(self):
        marks = _freeze(self.block_diversity)
        object.__setattr__(self, "block_diversity", marks)
        if len(marks) != self.partition.n_blocks:
            raise PartitionError("one diversity mark per block required")
        if len(marks) and np.any(np.diff(marks) < -1e-9):
            raise PartitionError("diversity marks must be non-decreasing")
        if len(marks) and self.total_diversity < marks.max() - 1e-9:
            raise PartitionError("total diversity below a block mark")
        if self.total_diversity < -1e-9:
            raise PartitionError("negative total diversity")

    def __eq__(self, other):
        if not isinstance(other, AnnotatedPartition):
            return NotImplemented
        return (
            self.partition == other.partition
            and np.array_equal(self.block_diversity, other.block_diversity)
            and self.total_diversity == other.total_diversity
        )

    def __hash__(self):
        return hash((self.partition, self.block_diversity.tobytes(), self.total_diversity))


def make_partition(raw_blocks, mass=None) -> GeneralizedIntervalPartition:
    """Validate and sort raw (a, b) pairs into a partition.

    With ``mass`` absent the total mass is the largest right endpoint. Returns
    the strict IntervalPartition subtype when the dust is negligible.
    """
    pairs = [(float(a), float(b)) for a, b in raw_blocks]
    for a, b in pairs:
        if b - a <= MIN_BLOCK:
            raise NegativeLength(f"block ({a}, {b}) has length <= {MIN_BLOCK}")
        if a < 0.0:
            raise BlockOutsideRange(f"block ({a}, {b}) starts below 0")
    pairs.sort()
    for (a1, b1), (a2, b2) in zip(pairs, pairs[1:]):
        if b1 - a2 > MIN_BLOCK:
            raise OverlappingBlocks(f"blocks ({a1}, {b1}) and ({a2}, {b2}) overlap")
    if mass is None:
        total = pairs[-1][1] if pairs else 0.0
    else:
        total = float(mass)
        if total < 0.0:
            raise BlockOutsideRange("mass must be nonnegative")
        if pairs and pairs[-1][1] > total * (1 + 1e-12) + 1e-12:
            raise BlockOutsideRange(
                f"block ({pairs[-1][0]}, {pairs[-1][1]}) exceeds mass {total}"
            )
    lefts = _freeze([a for a, _ in pairs])
    rights = _freeze([b for _, b in pairs])
    block_total = float(np.sum(rights) - np.sum(lefts))
    cls = IntervalPartition if total - block_total <= MASS_TOL * max(1.0, total) else GeneralizedIntervalPartition
    return cls(lefts=lefts, rights=rights, mass=total)


def _bare(lefts, rights, mass) -> GeneralizedIntervalPartition:
    """Construct without validation; internal fast path for trusted arrays."""
    lefts = _freeze(lefts)
    rights = _freeze(rights)
    mass = float(mass)
    block_total = float(np.sum(rights) - np.sum(lefts))
    cls = IntervalPartition if mass - block_total <= MASS_TOL * max(1.0, mass) else GeneralizedIntervalPartition
    return cls(lefts=lefts, rights=rights, mass=mass)


EMPTY = make_partition([], 0.0)


def empty_partition(mass: float = 0.0) -> GeneralizedIntervalPartition:
    """A partition with no blocks; positive mass means pure dust."""
    return make_partition([], mass)


def concat(parts) -> GeneralizedIntervalPartition:
    """Concatenate partitions left to right, shifting each by the mass before it.

    Accepts AnnotatedPartition inputs (all or none); in that case the right
    operand's marks are shifted by the running total diversity and the totals
    add, so diversity composes the same way mass does.
    """
    parts = list(parts)
    if parts and isinstance(parts[0], AnnotatedPartition):
        return _concat_annotated(parts)
    offset = 0.0
    lefts, rights = [], []
    for p in parts:
        if p.n_blocks:
            lefts.append(p.lefts + offset)
            rights.append(p.rights + offset)
        offset += p.mass
    lefts = np.concatenate(lefts) if lefts else np.empty(0)
    rights = np.concatenate(rights) if rights else np.empty(0)
    return _bare(lefts, rights, offset)


def _concat_annotated(parts) -> AnnotatedPartition:
    if not all(isinstance(p, AnnotatedPartition) for p in parts):
        raise PartitionError("cannot mix annotated and plain partitions in concat")
    base = concat([p.partition for p in parts])
    marks = []
    shift = 0.0
    for p in parts:
        marks.append(p.block_diversity + shift)
        shift += p.total_diversity
    marks = np.concatenate(marks) if marks else np.empty(0)
    return AnnotatedPartition(partition=base, block_diversity=marks, total_diversity=shift)


def scale(c: float, part):
    """Multiply every endpoint and the mass by c > 0."""
    if not c > 0.0:
        raise NonPositiveScale(f"scale factor must be positive, got {c}")
    if isinstance(part, AnnotatedPartition):
        raise PartitionError("scaling annotated partitions needs alpha; rebuild the marks")
    return _bare(part.lefts * c, part.rights * c, part.mass * c)


def reverse(part) -> GeneralizedIntervalPartition:
    """Mirror the partition: block (a, b) becomes (M-b, M-a)."""
    m = part.mass
    return _bare((m - part.rights)[::-1], (m - part.lefts)[::-1], m)


def _check_alpha(alpha: float) -> float:
    if not (0.0 < alpha < 1.0):
        raise AlphaOutOfRange(f"alpha must lie in (0, 1), got {alpha}")
    return float(alpha)


def diversity_estimate(part, alpha: float, h: float, t: float = math.inf) -> float:
    """Gamma(1-alpha) * h^alpha * #{blocks longer than h ending at or before t}."""
    _check_alpha(alpha)
    if not h > 0.0:
        raise PartitionError(f"threshold h must be positive, got {h}")
    count = int(np.sum((part.lengths > h) & (part.rights <= t)))
    return float(_gamma_fn(1.0 - alpha)) * h**alpha * count


def ranked(part) -> np.ndarray:
    """Block lengths sorted non-increasingly (the ranked projection)."""
    return np.sort(part.lengths)[::-1]


def complement_intervals(part) -> list[tuple[float, float]]:
    """Maximal closed intervals of [0, M] minus the open blocks.

    Degenerate single points are returned as (x, x); they matter for the
    Hausdorff metric on complements even though they carry no dust.
    """
    out = []
    prev = 0.0
    for a, b in zip(part.lefts.tolist(), part.rights.tolist()):
        if a >= prev:
            out.append((prev, a))
        prev = b
    if part.mass >= prev:
        out.append((prev, part.mass))
    if not out:  # mass 0, no blocks
        out.append((0.0, 0.0))
    return out


# -- serialization ------------------------------------------------------------

def partition_to_dict(part) -> dict:
    return {"mass": part.mass, "blocks": [[a, b] for a, b in part.blocks()]}


def partition_from_dict(d) -> GeneralizedIntervalPartition:
    return make_partition(d["blocks"], d["mass"])


def partition_to_json(part) -> str:
    return json.dumps(partition_to_dict(part))


def partition_from_json(s: str) -> GeneralizedIntervalPartition:
    return partition_from_dict(json.loads(s))


def partition_to_csv_row(part) -> str:
    cells = [repr(part.mass)]
    for a, b in part.blocks():
        cells.append(repr(a))
        cells.append(repr(b))
    return ",".join(cells)


def partition_from_csv_row(row: str) -> GeneralizedIntervalPartition:
    cells = [c for c in row.strip().split(",") if c != ""]
    if not cells:
        raise PartitionError("empty CSV row")
    mass = float(cells[0])
    vals = [float(c) for c in cells[1:]]
    if len(vals) % 2:
        raise PartitionError("CSV row must hold an even number of endpoints")
    blocks = list(zip(vals[0::2], vals[1::2]))
    return make_partition(blocks, mass)
