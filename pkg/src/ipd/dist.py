"""Seeded samplers for the nonstandard distributions behind the
constructions: zero-truncated Poisson, exact squared-Bessel transitions
and bridges, negative-dimension squared-Bessel paths by time reversal,
and truncated stable jump fields and subordinators.

All samplers take an explicit numpy Generator (or an RngStream) and are
deterministic given (seed, stream_id, parameters).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ipd import _fast
from ipd.core import make_partition


class NonPositiveRate(ValueError):
    pass


class NegativeInputs(ValueError):
    pass


class GridOutsideBridge(ValueError):
    pass


class StepTooCoarse(ValueError):
    pass


@dataclass(frozen=True)
class RngStream:
    """Reproducible random stream: identical (seed, stream_id) give
    identical draws, distinct stream_ids give independent streams."""

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        return np.random.default_rng(ss)


def as_generator(rng):
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngStream or numpy Generator, got {type(rng)!r}")


def child_seed(rng) -> int:
    """One 63-bit seed for a compiled kernel call, consumed from rng."""
    return int(rng.integers(0, 1 << 63))


def sample_zero_truncated_poisson(rate, rng):
    """Poisson conditioned to be >= 1: P(K=k) = rate^k / (k! (e^rate - 1))."""
    if not rate > 0.0:
        raise NonPositiveRate(f"rate must be > 0, got {rate}")
    rng = as_generator(rng)
    if rate > 30.0:
        # conditioning is a near-no-op here; rejection is cheap
        while True:
            k = int(rng.poisson(rate))
            if k >= 1:
                return k
    p = rate / math.expm1(rate)
    u = rng.random()
    cum = p
    k = 1
    while u > cum and k < 1000:
        k += 1
        p *= rate / k
        cum += p
    return k


def sample_besq(x0, dim, t, rng, size=None):
    """Exact draw of a squared Bessel process at time t started at x0,
    via the noncentral chi-square mixture: K ~ Poisson(x0/2t), then
    Gamma(dim/2 + K, scale 2t).  Shape exactly 0 is absorption at 0."""
    if x0 < 0.0 or dim < 0.0 or not t > 0.0:
        raise NegativeInputs(f"need x0 >= 0, dim >= 0, t > 0; got {(x0, dim, t)}")
    rng = as_generator(rng)
    if size is None:
        k = int(rng.poisson(x0 / (2.0 * t)))
        shape = dim / 2.0 + k
        if shape == 0.0:
            return 0.0
        return float(rng.gamma(shape, 2.0 * t))
    k = rng.poisson(x0 / (2.0 * t), size=size)
    shape = dim / 2.0 + k
    out = np.zeros(size, dtype=np.float64)
    alive = shape > 0.0
    if np.any(alive):
        out[alive] = rng.gamma(shape[alive], 2.0 * t)
    return out


def besq0_extinction_prob(z, y):
    """Probability that a dimension-0 squared Bessel from z is absorbed
    by time y."""
    if not y > 0.0:
        raise NegativeInputs(f"y must be > 0, got {y}")
    if z < 0.0:
        raise NegativeInputs(f"z must be >= 0, got {z}")
    return math.exp(-z / (2.0 * y))


def sample_besq_bridge_grid(z, dim, levels, rng):
    """Joint sample of a squared Bessel bridge from 0 to 0 over [0, z]
    at the given interior grid points, by the space-time inversion
    f(s) = ((z-s)/z)^2 X(s z/(z-s)) with X an unconditioned squared
    Bessel from 0, advanced sequentially with exact transitions."""
    if not z > 0.0:
        raise NegativeInputs(f"z must be > 0, got {z}")
    levels = np.asarray(levels, dtype=np.float64)
    if levels.size and (levels.min() <= 0.0 or levels.max() >= z):
        raise GridOutsideBridge(f"grid must lie strictly inside (0, {z})")
    if np.any(np.diff(levels) <= 0.0):
        raise GridOutsideBridge("grid must be strictly increasing")
    rng = as_generator(rng)
    out = np.empty(levels.size)
    prev_u = 0.0
    prev_v = 0.0
    for i, s in enumerate(levels):
        u = s * z / (z - s)
        du = u - prev_u
        lam = prev_v / (2.0 * du)
        k = int(rng.poisson(lam)) if lam > 0.0 else 0
        v = float(rng.gamma(dim / 2.0 + k, 2.0 * du))
        w = (z - s) / z
        out[i] = w * w * v
        prev_u, prev_v = u, v
    return out


def sample_besq_neg_path(b, alpha, level_step, rng, max_len=1 << 24):
    """Grid path of a negative-dimension (-2*alpha) squared Bessel from b,
    absorbed at 0, as the time reversal of a dimension (4+2*alpha) path
    from 0 at its first grid crossing of b.  Returns (path, lifetime);
    path[0] is the crossing value (>= b) and the last entry is 0."""
    if not b > 0.0:
        raise NegativeInputs(f"b must be > 0, got {b}")
    if not 0.0 < alpha < 1.0:
        raise NegativeInputs(f"alpha must be in (0,1), got {alpha}")
    if level_step > b:
        raise StepTooCoarse(f"level_step {level_step} exceeds start value {b}")
    rng = as_generator(rng)
    fwd, crossed = _fast.besq_fwd_until(
        2.0 + alpha, level_step, b, max_len, child_seed(rng)
    )
    if not crossed:
        raise RuntimeError(f"no crossing of {b} within {max_len} steps")
    path = np.empty(fwd.size + 1)
    path[:-1] = fwd[::-1]
    path[-1] = 0.0
    return path, fwd.size * level_step


def stable_jump_rate(alpha, eps):
    """Intensity of excursion-lifetime jumps above eps."""
    return _fast.jump_rate(alpha, eps)


def sample_stable_jump_field(horizon, alpha, eps, rng):
    """Poisson field of jumps with size > eps on [0, horizon]: rows are
    (time, size), sorted by time.  Sizes follow the Pareto tail
    P(Z > z) = (z/eps)^(-1-alpha)."""
    if not eps > 0.0:
        raise NegativeInputs(f"eps must be > 0, got {eps}")
    rng = as_generator(rng)
    n = int(rng.poisson(horizon * _fast.jump_rate(alpha, eps)))
    times = np.sort(rng.random(n)) * horizon
    sizes = eps * rng.random(n) ** (-1.0 / (1.0 + alpha))
    out = np.empty((n, 2))
    out[:, 0] = times
    out[:, 1] = sizes
    return out


def sample_stable_subordinator_range(lam, alpha, eps, rng):
    """Run a truncated stable(alpha) subordinator (jump intensity
    alpha z^(-1-alpha)/gamma(1-alpha) above eps, smaller jumps folded
    into a compensating drift) until it first passes an independent
    Exponential(lam) level S.  Returns (pre-passage value Y(T-), the
    partition of [0, Y(T-)] whose blocks are the jumps before T in time
    order with drift as interleaved dust, and the gap S - Y(T-))."""
    if not lam > 0.0 or not eps > 0.0 or not 0.0 < alpha < 1.0:
        raise NegativeInputs(f"bad (lam, alpha, eps) = {(lam, alpha, eps)}")
    rng = as_generator(rng)
    s_level = rng.exponential(1.0 / lam)
    jump_rate = eps ** (-alpha) / math.gamma(1.0 - alpha)
    drift = alpha * eps ** (1.0 - alpha) / ((1.0 - alpha) * math.gamma(1.0 - alpha))
    waits = []
    sizes = []
    t_acc = 0.0
    y_acc = 0.0
    while True:
        chunk = 256
        w = rng.exponential(1.0 / jump_rate, size=chunk)
        z = eps * rng.random(chunk) ** (-1.0 / alpha)
        t_jump = t_acc + np.cumsum(w)
        pre = y_acc + np.cumsum(z) - z + drift * t_jump
        post = pre + z
        hit = np.nonzero(post > s_level)[0]
        if hit.size:
            k = int(hit[0])
            pre_drift_cross = np.nonzero(pre[: k + 1] >= s_level)[0]
            if pre_drift_cross.size:
                # drift alone crossed the level before this jump landed
                k = int(pre_drift_cross[0])
                waits.append(w[:k])
                sizes.append(z[:k])
                pre_mass = s_level
                gap = 0.0
            else:
                waits.append(w[:k])
                sizes.append(z[:k])
                pre_mass = float(pre[k])
                gap = s_level - pre_mass
            break
        waits.append(w)
        sizes.append(z)
        t_acc = float(t_jump[-1])
        y_acc += float(z.sum())
    w_all = np.concatenate(waits) if waits else np.empty(0)
    z_all = np.concatenate(sizes) if sizes else np.empty(0)
    t_all = np.cumsum(w_all)
    lefts = np.cumsum(z_all) - z_all + drift * t_all
    blocks = list(zip(lefts.tolist(), (lefts + z_all).tolist()))
    part = make_partition(blocks, mass=pre_mass)
    return pre_mass, part, gap
