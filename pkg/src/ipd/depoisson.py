"""De-Poissonization of mass-fluctuating partition paths.

A path of states at increasing levels carries a fluctuating total mass.
The time change tau(u) = inf{y : integral of 1/mass over [0, y] > u}
turns it into a unit-mass process: read the state at tau(u) and rescale
to mass one.  On a discrete level grid the integral is evaluated by the
trapezoid rule, with linear interpolation inside the crossing cell, and
tau(u) is snapped to the nearest available level.

A jump in the mass path can be encoded by repeating a level with two
different masses; the zero-width cell contributes nothing.
"""

from __future__ import annotations

import numpy as np

from .core import GeneralizedIntervalPartition, PartitionError, _bare
from .dist import as_generator
from .kernel import DEFAULT_STEP_TRUNC, evolve
from .pdip import DEFAULT_MAX_BLOCKS

__all__ = [
    "TimeChangeExhausted",
    "DepoissonizedPath",
    "unit_mass",
    "time_change",
    "depoissonize",
    "simulate_pdipe",
]


class TimeChangeExhausted(ValueError):
    """The grid integral of 1/mass never exceeds the requested u."""

    def __init__(self, u: float, reached: float):
        super().__init__(
            f"time change exhausted: requested u={u}, grid integral reaches {reached}"
        )
        self.u = u
        self.reached = reached


def unit_mass(part: GeneralizedIntervalPartition) -> GeneralizedIntervalPartition:
    """Rescale a state to total mass exactly one."""
    m = part.mass
    if m <= 0:
        raise PartitionError(f"cannot normalize a state of mass {m}")
    return _bare(part.lefts / m, part.rights / m, 1.0)


def _mass_grid(masses):
    arr = np.asarray(list(masses), dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] == 0:
        raise ValueError("masses must be a nonempty sequence of (level, mass) pairs")
    levels = arr[:, 0]
    vals = arr[:, 1]
    if np.any(np.diff(levels) < 0):
        raise ValueError("levels must be non-decreasing")
    # a path may end in absorption; only the positive-mass prefix is usable
    bad = np.nonzero(vals <= 0)[0]
    if bad.size:
        if bad[0] == 0:
            raise ValueError("mass must be positive at the first level")
        levels = levels[: bad[0]]
        vals = vals[: bad[0]]
    return levels, vals


def _cum_integral(levels: np.ndarray, vals: np.ndarray) -> np.ndarray:
    inv = 1.0 / vals
    cells = np.diff(levels) * 0.5 * (inv[:-1] + inv[1:])
    out = np.empty(levels.size)
    out[0] = 0.0
    np.cumsum(cells, out=out[1:])
    return out


def _invert(levels: np.ndarray, cum: np.ndarray, u: float) -> float:
    if u < 0:
        raise ValueError(f"u must be nonnegative, got {u}")
    if u == 0:
        return float(levels[0])
    k = int(np.searchsorted(cum, u, side="right"))
    if k >= cum.size:
        raise TimeChangeExhausted(u, float(cum[-1]))
    # zero-width cells never cross since their cum entries coincide
    width = levels[k] - levels[k - 1]
    return float(levels[k - 1] + (u - cum[k - 1]) * width / (cum[k] - cum[k - 1]))


def time_change(masses, u: float) -> float:
    """Level at which the running integral of 1/mass first exceeds u."""
    levels, vals = _mass_grid(masses)
    return _invert(levels, _cum_integral(levels, vals), u)


class DepoissonizedPath(list):
    """List of (u, unit-mass state) with snapping metadata attached.

    snap_errors[i] is |tau(u_i) - level actually used|; levels_used[i] is
    that level.  simulate_pdipe additionally sets absorbed,
    absorption_level and truncated_u.
    """

    snap_errors: np.ndarray
    levels_used: np.ndarray
    absorbed: bool = False
    absorption_level = None
    truncated_u: np.ndarray = np.empty(0)


def depoissonize(path, u_grid) -> DepoissonizedPath:
    """Unit-mass states read along the time change of a level path.

    path is a list of (level, state) with increasing levels; u_grid is a
    nonnegative increasing sequence.  Each tau(u) is snapped to the
    nearest path level and the state there is rescaled to mass one.
    """
    path = list(path)
    if not path:
        raise ValueError("path must contain at least one (level, state) entry")
    u_grid = np.atleast_1d(np.asarray(u_grid, dtype=np.float64))
    if u_grid.size and (np.any(u_grid < 0) or np.any(np.diff(u_grid) < 0)):
        raise ValueError("u_grid must be nonnegative and non-decreasing")
    glv, gvals = _mass_grid([(y, s.mass) for y, s in path])
    cum = _cum_integral(glv, gvals)
    # snap only to levels in the positive-mass prefix
    levels = glv
    states = [s for _, s in path[: glv.size]]
    out = DepoissonizedPath()
    used = np.empty(u_grid.size)
    err = np.empty(u_grid.size)
    for i, u in enumerate(u_grid):
        tau = _invert(glv, cum, float(u))
        k = int(np.searchsorted(levels, tau))
        if k >= levels.size:
            k = levels.size - 1
        elif k > 0 and tau - levels[k - 1] <= levels[k] - tau:
            k -= 1
        used[i] = levels[k]
        err[i] = abs(tau - levels[k])
        out.append((float(u), unit_mass(states[k])))
    out.snap_errors = err
    out.levels_used = used
    return out


def simulate_pdipe(
    beta0: GeneralizedIntervalPartition,
    alpha: float,
    theta: float,
    u_grid,
    level_step: float,
    rng,
    trunc: float = DEFAULT_STEP_TRUNC,
    max_blocks: int = DEFAULT_MAX_BLOCKS,
    max_chunks: int = 64,
) -> DepoissonizedPath:
    """Unit-mass evolution: run the level kernel, then de-Poissonize.

    The level grid has spacing level_step and is extended on demand until
    the mass integral passes max(u_grid).  If the path is absorbed at
    zero mass first (possible for theta < 1), the result covers only the
    reachable part of u_grid and is marked absorbed, with the dropped u
    values in truncated_u.
    """
    if level_step <= 0:
        raise ValueError(f"level_step must be positive, got {level_step}")
    if abs(beta0.mass - 1.0) > 1e-9:
        raise PartitionError(f"initial state must have unit mass, got {beta0.mass}")
    u_grid = np.atleast_1d(np.asarray(u_grid, dtype=np.float64))
    u_max = float(u_grid[-1]) if u_grid.size else 0.0
    gen = as_generator(rng)

    state = unit_mass(beta0)
    path = [(0.0, state)]
    y = 0.0
    integral = 0.0
    inv_prev = 1.0
    absorbed = False
    absorption_level = None
    chunk = max(16, int(np.ceil(1.25 * u_max / level_step)) + 4)
    rel = np.arange(1, chunk + 1) * level_step
    for _ in range(max_chunks):
        if integral > u_max or absorbed:
            break
        for dy, s in zip(rel, evolve(state, rel, alpha, theta, gen, trunc, max_blocks)):
            path.append((y + dy, s))
            if s.mass <= 0:
                absorbed = True
                absorption_level = y + dy
                break
            inv = 1.0 / s.mass
            integral += level_step * 0.5 * (inv_prev + inv)
            inv_prev = inv
            if integral > u_max:
                break
        y = path[-1][0]
        state = path[-1][1]
    else:
        raise RuntimeError(
            f"mass integral reached only {integral} after {max_chunks} grid extensions"
        )

    if absorbed:
        # tau(0) is the grid origin, so u = 0 always survives absorption
        reachable = u_grid[(u_grid < integral) | (u_grid == 0)]
    else:
        reachable = u_grid
    out = depoissonize(path, reachable)
    out.absorbed = absorbed
    out.absorption_level = absorption_level
    out.truncated_u = u_grid[reachable.size :].copy()
    return out
