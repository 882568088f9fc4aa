"""Exact transition sampling for the measure-valued evolution: per-block
offspring clades, immigration, dust offspring, and multi-level paths.

Truncation convention throughout this module: `trunc` is an absolute
remaining-mass threshold applied inside each offspring component, so one
step's total stick-breaking cost is bounded by (total mass)/trunc no
matter how many clades survive.  Dust is carried, never renormalized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ipd import _fast
from ipd.core import GeneralizedIntervalPartition, _bare, empty_partition
from ipd.dist import as_generator, child_seed, sample_zero_truncated_poisson
from ipd.pdip import DEFAULT_MAX_BLOCKS

DEFAULT_STEP_TRUNC = 1e-8

DUST_RATE_CONVENTIONS = ("mass_over_2y", "alpha_mass_over_y")


class NonPositiveParams(ValueError):
    pass


@dataclass(frozen=True)
class KernelParams:
    """Parameters of one transition over an elapsed level y > 0."""

    alpha: float
    theta: float
    y: float
    r: float = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise NonPositiveParams(f"alpha must be in (0,1), got {self.alpha}")
        if self.theta < 0.0:
            raise NonPositiveParams(f"theta must be >= 0, got {self.theta}")
        if not self.y > 0.0:
            raise NonPositiveParams(f"y must be > 0, got {self.y}")
        object.__setattr__(self, "r", 1.0 / (2.0 * self.y))


def sample_L(b, r, alpha, rng):
    """Longest-block component of a surviving clade: Gamma(K - alpha,
    rate r) with K zero-truncated Poisson(b*r)."""
    if not b > 0.0 or not r > 0.0:
        raise NonPositiveParams(f"need b > 0 and r > 0, got {(b, r)}")
    if not 0.0 < alpha < 1.0:
        raise NonPositiveParams(f"alpha must be in (0,1), got {alpha}")
    rng = as_generator(rng)
    k = sample_zero_truncated_poisson(b * r, rng)
    return float(rng.gamma(k - alpha, 1.0 / r))


def mean_L(b, r, alpha):
    """Closed-form mean of sample_L."""
    return (b * r / -math.expm1(-b * r) - alpha) / r


def _component(scale, alpha, theta, trunc, rng, max_blocks):
    """Blocks of scale * (unit stick-breaking draw), stopping once the
    remaining absolute mass falls below trunc.  Returns (lengths in
    spatial order, total component mass)."""
    if scale <= 0.0:
        return np.empty(0), max(scale, 0.0)
    rel = trunc / scale
    if rel >= 1.0:
        return np.empty(0), scale
    masses, parents, _ = _fast.sb_masses(
        alpha, theta, rel, max_blocks, child_seed(rng)
    )
    order = _fast.insertion_order(parents)
    return scale * masses[order], scale


def sample_mu(b, r, alpha, rng, trunc=DEFAULT_STEP_TRUNC, max_blocks=DEFAULT_MAX_BLOCKS):
    """Offspring clade of one block of length b over an elapsed level with
    rate r: empty with probability e^(-b*r), otherwise a leftmost block of
    length sample_L followed by an independent Gamma(alpha, rate r)
    multiple of a unit (alpha, alpha) draw."""
    if not b > 0.0 or not r > 0.0:
        raise NonPositiveParams(f"need b > 0 and r > 0, got {(b, r)}")
    rng = as_generator(rng)
    if rng.random() < math.exp(-b * r):
        return empty_partition(0.0)
    ell = sample_L(b, r, alpha, rng)
    g = float(rng.gamma(alpha, 1.0 / r))
    tail, tail_mass = _component(g, alpha, alpha, trunc, rng, max_blocks)
    lengths = np.concatenate([[ell], tail])
    rights = np.cumsum(lengths)
    return _bare(rights - lengths, rights, ell + tail_mass)


def sample_mu_tilde(r, alpha, rng, trunc=DEFAULT_STEP_TRUNC, max_blocks=DEFAULT_MAX_BLOCKS):
    """Immigration-type clade: never empty, total mass Exponential(rate r);
    the small-b limit of sample_mu conditioned on survival."""
    if not r > 0.0:
        raise NonPositiveParams(f"need r > 0, got {r}")
    rng = as_generator(rng)
    ell = float(rng.gamma(1.0 - alpha, 1.0 / r))
    g = float(rng.gamma(alpha, 1.0 / r))
    tail, tail_mass = _component(g, alpha, alpha, trunc, rng, max_blocks)
    lengths = np.concatenate([[ell], tail])
    rights = np.cumsum(lengths)
    return _bare(rights - lengths, rights, ell + tail_mass)


def _assemble(segments):
    """Concatenate (lengths, mass) components into one partition, packing
    each component's blocks at the left of its mass span."""
    total = 0.0
    lefts = []
    rights = []
    for lengths, mass in segments:
        if lengths.size:
            r = total + np.cumsum(lengths)
            lefts.append(r - lengths)
            rights.append(r)
        total += mass
    if not lefts:
        return empty_partition(total)
    return _bare(np.concatenate(lefts), np.concatenate(rights), total)


def kernel_step(beta, params, rng, trunc=DEFAULT_STEP_TRUNC, max_blocks=DEFAULT_MAX_BLOCKS):
    """One exact transition of the strict-state kernel: immigration of
    Gamma(theta, rate 1/(2y)) times a unit (alpha, theta) draw at the far
    left, then an independent offspring clade per input block, in the
    input blocks' spatial order."""
    rng = as_generator(rng)
    a, th, r = params.alpha, params.theta, params.r
    segments = []
    if th > 0.0:
        g_imm = float(rng.gamma(th, 1.0 / r))
        segments.append(_component(g_imm, a, th, trunc, rng, max_blocks))
    lengths = beta.lengths
    if lengths.size:
        u = rng.random(lengths.size)
        surv = u < -np.expm1(-lengths * r)
        ells = _fast.ztp_gamma_batch(lengths[surv], r, a, child_seed(rng))
        gs = rng.gamma(a, 1.0 / r, size=int(surv.sum()))
        si = 0
        for i in range(lengths.size):
            if not surv[i]:
                continue
            tail, tail_mass = _component(float(gs[si]), a, a, trunc, rng, max_blocks)
            seg = np.concatenate([[ells[si]], tail])
            segments.append((seg, ells[si] + tail_mass))
            si += 1
    return _assemble(segments)


def kernel_step_generalized(
    beta,
    params,
    rng,
    trunc=DEFAULT_STEP_TRUNC,
    max_blocks=DEFAULT_MAX_BLOCKS,
    dust_rate=DUST_RATE_CONVENTIONS[0],
):
    """Transition for generalized states: block offspring as in
    kernel_step, plus dust offspring.  Dust of mass m spawns
    J ~ Poisson(m/(2y)) immigration-type clades (convention
    "mass_over_2y"; "alpha_mass_over_y" uses alpha*m/y), placed by
    uniform dust coordinates and interleaved with the block offspring
    in spatial order."""
    if dust_rate not in DUST_RATE_CONVENTIONS:
        raise NonPositiveParams(f"unknown dust_rate {dust_rate!r}")
    rng = as_generator(rng)
    a, th, r = params.alpha, params.theta, params.r
    m = beta.dust_mass
    if m <= 0.0:
        return kernel_step(beta, params, rng, trunc, max_blocks)
    lam = m * r if dust_rate == "mass_over_2y" else 2.0 * a * m * r
    n_clades = int(rng.poisson(lam))
    # dust coordinate of each clade: position within the dust measured
    # left to right; gap k is the dust before block k+1
    coords = np.sort(rng.random(n_clades)) * m
    lengths = beta.lengths
    gaps_before = _dust_gaps(beta)
    clades = [
        sample_mu_tilde(r, a, rng, trunc, max_blocks) for _ in range(n_clades)
    ]
    segments = []
    if th > 0.0:
        g_imm = float(rng.gamma(th, 1.0 / r))
        segments.append(_component(g_imm, a, th, trunc, rng, max_blocks))
    surv = np.empty(0, dtype=bool)
    ells = np.empty(0)
    if lengths.size:
        u = rng.random(lengths.size)
        surv = u < -np.expm1(-lengths * r)
        ells = _fast.ztp_gamma_batch(lengths[surv], r, a, child_seed(rng))
    gs = rng.gamma(a, 1.0 / r, size=int(surv.sum())) if lengths.size else np.empty(0)
    ci = 0
    si = 0
    for k in range(lengths.size + 1):
        gap_right = gaps_before[k]
        while ci < n_clades and coords[ci] <= gap_right:
            part = clades[ci]
            segments.append((part.lengths, part.mass))
            ci += 1
        if k == lengths.size:
            break
        if surv[k]:
            tail, tail_mass = _component(float(gs[si]), a, a, trunc, rng, max_blocks)
            seg = np.concatenate([[ells[si]], tail])
            segments.append((seg, ells[si] + tail_mass))
            si += 1
    while ci < n_clades:
        part = clades[ci]
        segments.append((part.lengths, part.mass))
        ci += 1
    return _assemble(segments)


def _dust_gaps(beta):
    """Cumulative dust lying at or left of each gap: entry k is the dust
    before block k+1, the last entry is the total dust."""
    lengths = beta.lengths
    n = lengths.size
    out = np.empty(n + 1)
    if n == 0:
        out[0] = beta.dust_mass
        return out
    # dust left of block k+1 = left endpoint minus block mass before it
    covered = np.concatenate([[0.0], np.cumsum(lengths)[:-1]])
    out[:n] = beta.lefts - covered
    out[n] = beta.dust_mass
    return np.maximum.accumulate(np.clip(out, 0.0, None))


def evolve(
    beta,
    levels,
    alpha,
    theta,
    rng,
    trunc=DEFAULT_STEP_TRUNC,
    max_blocks=DEFAULT_MAX_BLOCKS,
    dust_rate=DUST_RATE_CONVENTIONS[0],
):
    """March the generalized-state kernel through the given increasing
    absolute levels; returns the list of states, one per level."""
    levels = np.asarray(levels, dtype=np.float64)
    if levels.size == 0:
        return []
    if levels[0] <= 0.0 or np.any(np.diff(levels) <= 0.0):
        raise NonPositiveParams("levels must be positive and strictly increasing")
    rng = as_generator(rng)
    out = []
    state = beta
    prev = 0.0
    for y in levels:
        params = KernelParams(alpha, theta, float(y - prev))
        state = kernel_step_generalized(
            state, params, rng, trunc, max_blocks, dust_rate
        )
        out.append(state)
        prev = float(y)
    return out
