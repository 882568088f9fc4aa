"""Distances between interval partitions.

Two kinds of distance live here.  ``hausdorff_complement`` is the classical
Hausdorff distance between the complement sets of two partitions.  The
correspondence distortions ``dprime_H`` and ``d_alpha`` instead match blocks
across the two partitions in order and charge for length mismatches, skipped
mass, and (for annotated inputs) diversity-mark discrepancies.  Both are
computed exactly: the infimum over correspondences is a minimum of a maximum
of additive terms, found by a dynamic program over a Pareto frontier of
partial sums.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

from .core import (
    AnnotatedPartition,
    GeneralizedIntervalPartition,
    PartitionError,
    complement_intervals,
)

__all__ = [
    "Correspondence",
    "InvalidCorrespondence",
    "distortion",
    "dprime_H",
    "d_alpha",
    "hausdorff_complement",
]


class InvalidCorrespondence(PartitionError):
    pass


@dataclass(frozen=True)
class Correspondence:
    """Matched pairs of block indices, strictly increasing on both sides.

    The left coordinate indexes blocks of the first partition, the right
    coordinate blocks of the second, both in left-to-right block order.
    Strict monotonicity means matched blocks never cross.
    """

    pairs: tuple

    def __post_init__(self):
        pairs = tuple((int(i), int(j)) for i, j in self.pairs)
        if pairs and (pairs[0][0] < 0 or pairs[0][1] < 0):
            raise InvalidCorrespondence("negative block index")
        for (i0, j0), (i1, j1) in zip(pairs, pairs[1:]):
            if i1 <= i0 or j1 <= j0:
                raise InvalidCorrespondence(
                    "pairs must be strictly increasing in both coordinates"
                )
        object.__setattr__(self, "pairs", pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)


def _as_pairs(corr) -> tuple:
    if isinstance(corr, Correspondence):
        return corr.pairs
    return Correspondence(tuple(corr)).pairs


def distortion(
    beta: GeneralizedIntervalPartition,
    gamma: GeneralizedIntervalPartition,
    corr,
    annotations: tuple[AnnotatedPartition, AnnotatedPartition] | None = None,
) -> float:
    """Distortion of a single correspondence between two partitions.

    Each matched pair charges the absolute difference of block lengths to
    both sides; mass left unmatched on a side (blocks and dust alike)
    charges that side only.  The result is the larger side total.  With
    ``annotations``, a pair of AnnotatedPartition aligned with the inputs,
    the maximum also covers the largest discrepancy of diversity marks
    among matched blocks and the gap between total diversities.
    """
    pairs = _as_pairs(corr)
    bl = beta.lengths
    gl = gamma.lengths
    for i, j in pairs:
        if i >= beta.n_blocks or j >= gamma.n_blocks:
            raise InvalidCorrespondence(f"pair ({i}, {j}) out of range")
    sum_abs = 0.0
    matched_b = 0.0
    matched_g = 0.0
    for i, j in pairs:
        sum_abs += abs(bl[i] - gl[j])
        matched_b += bl[i]
        matched_g += gl[j]
    out = max(sum_abs + beta.mass - matched_b, sum_abs + gamma.mass - matched_g)
    if annotations is not None:
        ann_b, ann_g = annotations
        if (
            ann_b.partition.n_blocks != beta.n_blocks
            or ann_g.partition.n_blocks != gamma.n_blocks
        ):
            raise InvalidCorrespondence("annotations do not match the partitions")
        for i, j in pairs:
            out = max(out, abs(ann_b.block_diversity[i] - ann_g.block_diversity[j]))
        out = max(out, abs(ann_b.total_diversity - ann_g.total_diversity))
    return float(out)


# -- exact minimization over correspondences ----------------------------------
#
# A state is (S, Mb, Mg, C): S the running sum of matched |length diffs|,
# Mb and Mg the matched mass on each side, C the running sup of matched
# mark discrepancies.  The final objective max(S + mass_b - Mb,
# S + mass_g - Mg, C, extra) is monotone in (S, -Mb, -Mg, C), so states
# dominated coordinatewise in that order can be dropped.  Domination is
# compared exactly (no tolerance): each surviving path accumulates the
# same floating-point operations in the same order as ``distortion`` on
# the correspondence it encodes, which keeps the minimum bit-identical
# to brute-force enumeration.


def _push(cell: list, state: tuple) -> None:
    s0, s1, s2, s3 = state
    for t in cell:
        if t[0] <= s0 and t[1] >= s1 and t[2] >= s2 and t[3] <= s3:
            return
    cell[:] = [
        t
        for t in cell
        if not (s0 <= t[0] and s1 >= t[1] and s2 >= t[2] and s3 <= t[3])
    ]
    cell.append(state)


def _frontier(b_len, g_len, b_marks, g_marks) -> list:
    n = len(b_len)
    m = len(g_len)
    grid = [[[] for _ in range(m + 1)] for _ in range(n + 1)]
    grid[0][0].append((0.0, 0.0, 0.0, 0.0))
    for i in range(n + 1):
        for j in range(m + 1):
            cell = grid[i][j]
            if not cell:
                continue
            if i < n:
                nxt = grid[i + 1][j]
                for st in cell:  # leave beta block i unmatched
                    _push(nxt, st)
            if j < m:
                nxt = grid[i][j + 1]
                for st in cell:  # leave gamma block j unmatched
                    _push(nxt, st)
            if i < n and j < m:
                nxt = grid[i + 1][j + 1]
                dm = abs(b_marks[i] - g_marks[j]) if b_marks is not None else 0.0
                for s0, s1, s2, s3 in cell:
                    _push(
                        nxt,
                        (
                            s0 + abs(b_len[i] - g_len[j]),
                            s1 + b_len[i],
                            s2 + g_len[j],
                            max(s3, dm),
                        ),
                    )
    return grid[n][m]


def _best(frontier, mass_b: float, mass_g: float, extra: float) -> float:
    best = math.inf
    for s0, s1, s2, s3 in frontier:
        v = max(s0 + mass_b - s1, s0 + mass_g - s2, s3, extra)
        if v < best:
            best = v
    return float(best)


def dprime_H(
    beta: GeneralizedIntervalPartition, gamma: GeneralizedIntervalPartition
) -> float:
    """Minimal Hausdorff distortion over all correspondences, exactly."""
    front = _frontier(beta.lengths.tolist(), gamma.lengths.tolist(), None, None)
    return _best(front, beta.mass, gamma.mass, 0.0)


def d_alpha(beta: AnnotatedPartition, gamma: AnnotatedPartition) -> float:
    """Minimal mark-aware distortion over all correspondences, exactly.

    The total-diversity gap does not depend on the correspondence, so it
    is folded in after the minimization.
    """
    pb = beta.partition
    pg = gamma.partition
    front = _frontier(
        pb.lengths.tolist(),
        pg.lengths.tolist(),
        beta.block_diversity.tolist(),
        gamma.block_diversity.tolist(),
    )
    extra = abs(beta.total_diversity - gamma.total_diversity)
    return _best(front, pb.mass, pg.mass, extra)


# -- Hausdorff distance between complements -----------------------------------


def _dist_to_pieces(x: float, lefts: list, rights: list) -> float:
    # pieces are sorted and disjoint; distance from x to their union
    k = bisect_right(lefts, x) - 1
    best = math.inf
    if k >= 0:
        if x <= rights[k]:
            return 0.0
        best = x - rights[k]
    if k + 1 < len(lefts):
        best = min(best, lefts[k + 1] - x)
    return best


def _directed_sup(pieces, other_pieces, other_blocks) -> float:
    lefts = [a for a, _ in other_pieces]
    rights = [b for _, b in other_pieces]
    cands = []
    for a, b in pieces:
        cands.append(a)
        if b > a:
            cands.append(b)
    # the distance to the other complement peaks at midpoints of the other
    # partition's blocks; only those covered by these pieces matter
    for a, b in other_blocks:
        mid = 0.5 * (a + b)
        for pa, pb in pieces:
            if pa <= mid <= pb:
                cands.append(mid)
                break
    return max(_dist_to_pieces(x, lefts, rights) for x in cands)


def hausdorff_complement(
    beta: GeneralizedIntervalPartition, gamma: GeneralizedIntervalPartition
) -> float:
    """Hausdorff distance between the complements of two partitions.

    The complement of a partition of [0, M] is a finite union of closed
    intervals and isolated points, so the supremum of the distance
    function is attained on a finite candidate set: piece endpoints plus
    midpoints of the other partition's blocks.
    """
    p_beta = complement_intervals(beta)
    p_gamma = complement_intervals(gamma)
    return float(
        max(
            _directed_sup(p_beta, p_gamma, gamma.blocks()),
            _directed_sup(p_gamma, p_beta, beta.blocks()),
        )
    )
