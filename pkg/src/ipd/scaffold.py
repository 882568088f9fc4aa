"""Path-level route to the interval-partition laws.

A spindle field is a compensated, spectrally positive jump path whose
jumps carry excursion-shaped mass paths (spindles) sampled on a level
grid.  Skewering the field at a level collects the spindle widths there
into an interval partition.  Clades prepend an initial spindle and stop
the path when it returns below that spindle's lifetime; the two
Ray-Knight constructions shift the path by (a multiple of) its running
infimum before skewering.

Everything here is approximate in two explicit knobs: the jump
truncation eps and the spindle level_step.  The transition kernel is
the exact oracle these constructions are tested against.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field

import numpy as np

from . import _fast
from .core import GeneralizedIntervalPartition, _bare
from .dist import (
    NegativeInputs,
    as_generator,
    child_seed,
    sample_besq_bridge_grid,
    sample_besq_neg_path,
    sample_stable_jump_field,
)

__all__ = [
    "SpindleField",
    "LevelStates",
    "build_scaffolding",
    "skewer",
    "snap_level",
    "sample_clade",
    "ray_knight_dust",
    "ray_knight_perturbed",
    "STATUS_OK",
    "STATUS_TIME_CAPPED",
    "STATUS_BUFFER_FULL",
]

STATUS_OK = 0
STATUS_TIME_CAPPED = 1
STATUS_BUFFER_FULL = 2

DEFAULT_LEVEL_STEP = 1e-3


@dataclass
class SpindleField:
    """A jump path plus one level-grid-sampled spindle per jump.

    times, sizes and births are aligned: jump j happens at times[j], has
    size (and spindle lifetime) sizes[j], and its spindle spans levels
    (births[j], births[j] + sizes[j]), births[j] being the path value
    just before the jump.  Spindle j's stored values sit at the absolute
    grid levels (spindle_lo[j] + i) * level_step for i in range of its
    slice spindle_values[spindle_off[j]:spindle_off[j+1]].
    """

    times: np.ndarray
    sizes: np.ndarray
    births: np.ndarray
    spindle_lo: np.ndarray
    spindle_off: np.ndarray
    spindle_values: np.ndarray
    eps: float
    level_step: float
    alpha: float
    horizon: float
    status: int = STATUS_OK
    scaffold_times: np.ndarray = dataclass_field(default=None, repr=False)
    scaffold_values: np.ndarray = dataclass_field(default=None, repr=False)

    @property
    def n_jumps(self) -> int:
        return self.times.size

    @property
    def drift(self) -> float:
        return _fast.compensation_drift(self.alpha, self.eps)

    @property
    def jumps(self) -> list:
        """Jumps as (time, size, (spindle levels, spindle values))."""
        out = []
        step = self.level_step
        for j in range(self.times.size):
            sl = slice(self.spindle_off[j], self.spindle_off[j + 1])
            ks = self.spindle_lo[j] + np.arange(sl.stop - sl.start)
            out.append(
                (self.times[j], self.sizes[j], (ks * step, self.spindle_values[sl]))
            )
        return out

    @property
    def scaffold_grid(self):
        """(times, values) of the piecewise-linear compensated path."""
        return self.scaffold_times, self.scaffold_values


class LevelStates(list):
    """One partition per requested level, with run metadata attached."""

    status: int = STATUS_OK
    t_end: float = 0.0
    n_jumps: int = 0


def _scaffold_grid_arrays(times, sizes, births, t_end, x_end, x_init=0.0):
    n = times.size
    ts = np.empty(2 * n + 2)
    xs = np.empty(2 * n + 2)
    ts[0] = 0.0
    xs[0] = x_init
    ts[1 : 2 * n + 1 : 2] = times
    ts[2 : 2 * n + 2 : 2] = times
    xs[1 : 2 * n + 1 : 2] = births
    xs[2 : 2 * n + 2 : 2] = births + sizes
    ts[-1] = t_end
    xs[-1] = x_end
    return ts, xs


def build_scaffolding(
    horizon: float,
    alpha: float,
    eps: float,
    rng,
    level_step: float = DEFAULT_LEVEL_STEP,
    spindles: bool = True,
) -> SpindleField:
    """Compensated truncated jump path on [0, horizon] with bridge spindles.

    Jump sizes exceed eps and the downward drift exactly balances their
    mean, so the path is centred.  Each jump of size z is marked by an
    excursion bridge of dimension 4 + 2*alpha sampled at the absolute
    grid levels its spindle straddles; spindles=False skips the marking
    when only the path itself is needed.
    """
    if not horizon > 0.0:
        raise NegativeInputs(f"horizon must be > 0, got {horizon}")
    if not 0.0 < alpha < 1.0:
        raise NegativeInputs(f"alpha must be in (0,1), got {alpha}")
    rng = as_generator(rng)
    jumps = sample_stable_jump_field(horizon, alpha, eps, rng)
    times = jumps[:, 0]
    sizes = jumps[:, 1]
    drift = _fast.compensation_drift(alpha, eps)
    births = np.cumsum(sizes) - sizes - drift * times
    n = times.size
    step = float(level_step)
    lo_idx = np.zeros(n, dtype=np.int64)
    off = np.zeros(n + 1, dtype=np.int64)
    chunks = []
    if spindles:
        dim = 4.0 + 2.0 * alpha
        for j in range(n):
            b = births[j]
            z = sizes[j]
            k_lo = int(np.floor(b / step)) + 1
            k_hi = int(np.ceil((b + z) / step)) - 1
            while k_lo * step <= b:
                k_lo += 1
            while k_hi * step >= b + z:
                k_hi -= 1
            lo_idx[j] = k_lo
            cnt = max(0, k_hi - k_lo + 1)
            off[j + 1] = off[j] + cnt
            if cnt:
                s = np.arange(k_lo, k_hi + 1) * step - b
                chunks.append(sample_besq_bridge_grid(z, dim, s, rng))
    else:
        off[1:] = 0
    values = np.concatenate(chunks) if chunks else np.empty(0)
    x_end = float(sizes.sum() - drift * horizon)
    ts, xs = _scaffold_grid_arrays(times, sizes, births, horizon, x_end)
    return SpindleField(
        times=times,
        sizes=sizes,
        births=births,
        spindle_lo=lo_idx,
        spindle_off=off,
        spindle_values=values,
        eps=float(eps),
        level_step=step,
        alpha=float(alpha),
        horizon=float(horizon),
        scaffold_times=ts,
        scaffold_values=xs,
    )


def snap_level(y: float, field: SpindleField) -> tuple:
    """Nearest spindle-grid index for level y and the snap distance."""
    k = int(round(y / field.level_step))
    return k, abs(y - k * field.level_step)


def _partition_from_values(v: np.ndarray) -> GeneralizedIntervalPartition:
    if v.size == 0:
        return _bare(np.empty(0), np.empty(0), 0.0)
    rights = np.cumsum(v)
    return _bare(rights - v, rights, float(rights[-1]))


def skewer(y: float, field: SpindleField, shift=None) -> GeneralizedIntervalPartition:
    """Partition of spindle widths at level y, in jump time order.

    y is snapped to the spindle grid (snap_level reports the distance).
    shift offsets the path the spindles ride on: a constant, or a
    function of the jump time; it is itself snapped to whole grid steps
    per jump.  A spindle contributes iff the shifted level falls
    strictly inside its span.
    """
    k, _ = snap_level(y, field)
    n = field.times.size
    if n == 0:
        return _bare(np.empty(0), np.empty(0), 0.0)
    if shift is None:
        q = np.full(n, k, dtype=np.int64)
    elif callable(shift):
        d = np.asarray([shift(t) for t in field.times], dtype=np.float64)
        q = k - np.rint(d / field.level_step).astype(np.int64)
    else:
        q = np.full(
            n, k - int(round(float(shift) / field.level_step)), dtype=np.int64
        )
    lo = field.spindle_lo
    cnt = np.diff(field.spindle_off)
    sel = (q >= lo) & (q < lo + cnt)
    idx = field.spindle_off[:-1][sel] + (q - lo)[sel]
    return _partition_from_values(field.spindle_values[idx])


def sample_clade(
    b: float,
    alpha: float,
    eps: float,
    level_step: float,
    rng,
    t_cap: float = np.inf,
    max_jumps: int = 1 << 20,
    max_vals: int = 1 << 21,
) -> SpindleField:
    """Descendant field of one block of size b.

    An initial spindle of dimension -2*alpha starts at level 0; the jump
    path starts at its lifetime and runs until it first returns to 0, so
    spindle births stay positive.  The skewer at level 0 is {(0, b)}:
    the initial spindle's boundary value is pinned to b exactly, while
    its interior keeps the sampled grid path.
    """
    if not b > 0.0:
        raise NegativeInputs(f"b must be > 0, got {b}")
    rng = as_generator(rng)
    path0, lifetime = sample_besq_neg_path(b, alpha, level_step, rng)
    times, sizes, births, lo_idx, off, vals, t_end, status = _fast.record_clade_field(
        child_seed(rng), alpha, eps, lifetime, level_step, t_cap, max_jumps, max_vals
    )
    spindle0 = path0[:-1].copy()  # values at k*level_step, k = 0 .. life/step - 1
    spindle0[0] = b
    times = np.concatenate(([0.0], times))
    sizes = np.concatenate(([lifetime], sizes))
    births = np.concatenate(([0.0], births))
    lo_idx = np.concatenate(([0], lo_idx))
    off = np.concatenate(([0], off + spindle0.size))
    vals = np.concatenate((spindle0, vals))
    x_end = 0.0 if status == STATUS_OK else float(
        births[-1] + sizes[-1] - _fast.compensation_drift(alpha, eps) * (t_end - times[-1])
    )
    ts, xs = _scaffold_grid_arrays(times, sizes, births, t_end, x_end)
    return SpindleField(
        times=times,
        sizes=sizes,
        births=births,
        spindle_lo=lo_idx,
        spindle_off=off,
        spindle_values=vals,
        eps=float(eps),
        level_step=float(level_step),
        alpha=float(alpha),
        horizon=float(t_end),
        status=int(status),
        scaffold_times=ts,
        scaffold_values=xs,
    )


def _check_levels(levels) -> np.ndarray:
    levels = np.atleast_1d(np.asarray(levels, dtype=np.float64))
    if levels.size == 0:
        raise ValueError("at least one level is required")
    if np.any(levels <= 0) or np.any(np.diff(levels) <= 0):
        raise ValueError("levels must be positive and strictly increasing")
    return levels


def _traversal_states(
    seed, alpha, eps, x0, h_offset, c_inf, stop_mode, xi_stop, levels, t_cap, max_blocks
) -> LevelStates:
    vals, t_end, njumps, status = _fast.traverse_jump_field(
        seed, alpha, eps, x0, h_offset, c_inf, stop_mode, xi_stop, levels, t_cap,
        max_blocks,
    )
    out = LevelStates(_partition_from_values(v) for v in vals)
    out.status = status
    out.t_end = t_end
    out.n_jumps = njumps
    return out


def ray_knight_dust(
    z: float,
    levels,
    alpha: float,
    eps: float,
    rng,
    t_cap: float = np.inf,
    max_blocks_per_level: int = 1 << 16,
) -> LevelStates:
    """Skewer of the infimum-shifted path started from dust of mass z.

    The path runs until its running infimum reaches -z/(2*alpha); the
    partitions are the skewer of the path minus its running infimum at
    each requested level, evaluated exactly at those levels.
    """
    if not z > 0.0:
        raise NegativeInputs(f"z must be > 0, got {z}")
    if not 0.0 < alpha < 1.0:
        raise NegativeInputs(f"alpha must be in (0,1), got {alpha}")
    levels = _check_levels(levels)
    return _traversal_states(
        child_seed(as_generator(rng)),
        alpha,
        eps,
        0.0,
        0.0,
        1.0,
        1,
        -z / (2.0 * alpha),
        levels,
        t_cap,
        max_blocks_per_level,
    )


def ray_knight_perturbed(
    x: float,
    theta: float,
    levels,
    alpha: float,
    eps: float,
    rng,
    t_cap: float = np.inf,
    max_blocks_per_level: int = 1 << 16,
) -> LevelStates:
    """Skewer of the infimum-perturbed path started from a flat initial
    interval of length x.

    The path X is replaced by X - (1 - alpha/theta) * (running infimum),
    offset by x, and stopped on first hitting level 0; requested levels
    must lie in (0, x].  At theta = alpha the perturbation coefficient is
    exactly zero and the construction coincides bit for bit with the
    unperturbed one.
    """
    if not x > 0.0:
        raise NegativeInputs(f"x must be > 0, got {x}")
    if not theta > 0.0:
        raise NegativeInputs(f"theta must be > 0, got {theta}")
    if not 0.0 < alpha < 1.0:
        raise NegativeInputs(f"alpha must be in (0,1), got {alpha}")
    levels = _check_levels(levels)
    if levels[-1] > x:
        raise ValueError(f"levels must lie in (0, x]; got {levels[-1]} > {x}")
    return _traversal_states(
        child_seed(as_generator(rng)),
        alpha,
        eps,
        0.0,
        float(x),
        1.0 - alpha / theta,
        0,
        0.0,
        levels,
        t_cap,
        max_blocks_per_level,
    )
