"""Samplers for the two-parameter interval-partition family, with
controlled truncation and diversity annotation."""

from __future__ import annotations

import math

import numpy as np

from ipd import _fast
from ipd.core import (
    AnnotatedPartition,
    PartitionError,
    _bare,
    make_partition,
)
from ipd.dist import as_generator, child_seed

DEFAULT_TRUNC = 1e-8

# hard ceiling on stick count; at alpha >= 0.5 a tiny trunc can ask for
# more sticks than memory allows, so the remainder is reported as dust
DEFAULT_MAX_BLOCKS = 1 << 23


class BadParameters(PartitionError):
    pass


def _check_params(alpha, theta, trunc):
    if not 0.0 < alpha < 1.0:
        raise BadParameters(f"alpha must be in (0,1), got {alpha}")
    if theta < 0.0:
        raise BadParameters(f"theta must be >= 0, got {theta}")
    if not trunc > 0.0:
        raise BadParameters(f"trunc must be > 0, got {trunc}")


def sample_pdip_stickbreaking(
    alpha, theta, rng, trunc=DEFAULT_TRUNC, max_blocks=DEFAULT_MAX_BLOCKS
):
    """One unit-mass draw by stick breaking with ordered insertion.

    Sticks W_j ~ Beta(theta + j*alpha, 1 - alpha) produce block masses
    P_n = W_1...W_{n-1}(1 - W_n); each new block is inserted immediately
    right of an existing block with probability alpha/(n*alpha + theta)
    each, or at the far left with probability theta/(n*alpha + theta).
    Breaking stops once the undistributed mass drops below trunc; the
    remainder is reported as dust, never renormalized away."""
    _check_params(alpha, theta, trunc)
    rng = as_generator(rng)
    masses, parents, _ = _fast.sb_masses(
        alpha, theta, trunc, max_blocks, child_seed(rng)
    )
    order = _fast.insertion_order(parents)
    m_ord = masses[order]
    rights = np.cumsum(m_ord)
    lefts = rights - m_ord
    return _bare(lefts, rights, 1.0)


def sample_pdip_alpha0_via_subordinator(alpha, lam, rng, eps=None):
    """Unit-mass draw of the theta=0 case from the stable-subordinator
    passage construction: an exponential level S is overshot, the gap
    below S becomes the leftmost block, and the subordinator's jumps fill
    the rest in time order.  Returns (S, partition)."""
    from ipd.dist import sample_stable_subordinator_range

    if not 0.0 < alpha < 1.0:
        raise BadParameters(f"alpha must be in (0,1), got {alpha}")
    if eps is None:
        eps = 1e-4 / lam
    rng = as_generator(rng)
    pre_mass, part, gap = sample_stable_subordinator_range(lam, alpha, eps, rng)
    s_level = pre_mass + gap
    lefts = np.empty(part.n_blocks + (1 if gap > 0.0 else 0))
    rights = np.empty_like(lefts)
    if gap > 0.0:
        lefts[0] = 0.0
        rights[0] = gap
        lefts[1:] = part.lefts + gap
        rights[1:] = part.rights + gap
    else:
        lefts[:] = part.lefts
        rights[:] = part.rights
    return s_level, _bare(lefts / s_level, rights / s_level, 1.0)


def annotate_diversity(beta, alpha, h_grid):
    """Attach per-block and total diversity marks estimated from block
    counts at the scales in h_grid (decreasing), with a final two-point
    Richardson step in h^alpha to cancel the leading large-block bias."""
    if not 0.0 < alpha < 1.0:
        raise BadParameters(f"alpha must be in (0,1), got {alpha}")
    h_grid = np.asarray(h_grid, dtype=np.float64)
    if h_grid.size < 1 or np.any(h_grid <= 0.0):
        raise BadParameters("h_grid must be positive")
    if h_grid.size >= 2 and np.any(np.diff(h_grid) >= 0.0):
        raise BadParameters("h_grid must be strictly decreasing")
    lengths = beta.lengths
    gam = math.gamma(1.0 - alpha)

    def _est(h):
        # per-block cumulative counts of earlier-or-equal blocks above h
        counts = np.cumsum(lengths > h)
        return gam * h**alpha * counts, gam * h**alpha * np.count_nonzero(lengths > h)

    if h_grid.size == 1:
        marks, total = _est(h_grid[0])
    else:
        m1, t1 = _est(h_grid[-2])
        m2, t2 = _est(h_grid[-1])
        c = (h_grid[-1] / h_grid[-2]) ** alpha
        marks = (m2 - c * m1) / (1.0 - c)
        total = (t2 - c * t1) / (1.0 - c)
    total = max(float(total), float(marks[-1]) if marks.size else 0.0)
    return AnnotatedPartition(beta, marks, total)
