"""Up-down Markov chain on integer compositions.

A composition is a tuple of positive integers.  One chain step removes a
uniformly random box and then adds one back, so the size n is preserved.
The move tables are built with the arithmetic of their inputs, so exact
rationals stay exact; sampling converts to float at the last moment.
"""

from __future__ import annotations

import math
import warnings
from fractions import Fraction

import numpy as np

from .core import GeneralizedIntervalPartition, _bare, empty_partition
from .dist import as_generator
from .moments import _check_comp, comp_size, remove_box
from .pdip import BadParameters

__all__ = [
    "DegenerateStart",
    "EmptyComposition",
    "down_moves",
    "down_step",
    "embed_composition",
    "path_count",
    "run_chain",
    "up_moves",
    "up_step",
]


class EmptyComposition(ValueError):
    pass


class DegenerateStart(UserWarning):
    """Up step from the empty composition with no immigration weight."""


def path_count(sigma) -> int:
    """Number of up-move sequences leading from the empty composition here.

    Equals n! / prod(sigma_j!); satisfies path_count(sigma) =
    sum_j path_count(remove_box(sigma, j)).
    """
    sigma = _check_comp(sigma)
    out = math.factorial(comp_size(sigma))
    for part in sigma:
        out //= math.factorial(part)
    return out


def _check_params(alpha, theta):
    if not 0 <= alpha < 1:
        raise BadParameters(f"alpha must lie in [0, 1), got {alpha}")
    if theta < 0:
        raise BadParameters(f"theta must be nonnegative, got {theta}")


def up_moves(sigma, alpha, theta) -> list:
    """All (probability, successor) pairs for one up step.

    With n boxes total: part j grows by one with probability
    (sigma_j - alpha)/(n + theta), a new part of size 1 appears
    immediately right of part j with probability alpha/(n + theta),
    and leftmost with probability theta/(n + theta).  From the empty
    composition a single part opens with probability one.
    """
    sigma = _check_comp(sigma)
    _check_params(alpha, theta)
    n = comp_size(sigma)
    if n == 0:
        return [(1, (1,))]
    denom = n + theta
    moves = []
    for j, part in enumerate(sigma):
        moves.append(((part - alpha) / denom, sigma[:j] + (part + 1,) + sigma[j + 1 :]))
    for j in range(len(sigma)):
        moves.append((alpha / denom, sigma[: j + 1] + (1,) + sigma[j + 1 :]))
    moves.append((theta / denom, (1,) + sigma))
    return moves


def down_moves(sigma) -> list:
    """All (probability, successor) pairs for one down step, exact.

    A uniform box is removed, so part j loses one with probability
    sigma_j / n; probabilities are Fractions and sum to one exactly.
    """
    sigma = _check_comp(sigma)
    n = comp_size(sigma)
    if n == 0:
        raise EmptyComposition("down step from the empty composition")
    return [
        (Fraction(part, n), remove_box(sigma, j + 1)) for j, part in enumerate(sigma)
    ]


def up_step(sigma, alpha: float, theta: float, rng) -> tuple:
    sigma = _check_comp(sigma)
    _check_params(alpha, theta)
    if comp_size(sigma) == 0:
        if theta == 0:
            warnings.warn(
                "up step from the empty composition with theta = 0; "
                "opening a single part",
                DegenerateStart,
                stacklevel=2,
            )
        return (1,)
    moves = up_moves(sigma, alpha, theta)
    weights = [float(w) for w, _ in moves]
    u = as_generator(rng).random() * math.fsum(weights)
    acc = 0.0
    for w, successor in zip(weights, (s for _, s in moves)):
        acc += w
        if u < acc:
            return successor
    return moves[-1][1]


def down_step(sigma, rng) -> tuple:
    sigma = _check_comp(sigma)
    n = comp_size(sigma)
    if n == 0:
        raise EmptyComposition("down step from the empty composition")
    # picking a uniform box hits part j with probability sigma_j / n exactly
    box = int(as_generator(rng).integers(n))
    acc = 0
    for j, part in enumerate(sigma):
        acc += part
        if box < acc:
            return remove_box(sigma, j + 1)
    raise AssertionError("unreachable")


def run_chain(
    n: int,
    alpha: float,
    theta: float,
    steps: int,
    rng,
    order: str = "down_up",
) -> list:
    """Trajectory of the size-n chain: the initial state, then one per step.

    The initial state is built by n up steps from the empty composition.
    Each step is remove-then-add by default so every emitted state has
    size n; order="up_down" swaps the two moves.
    """
    if n < 1:
        raise BadParameters(f"chain size must be at least 1, got {n}")
    if steps < 0:
        raise BadParameters(f"steps must be nonnegative, got {steps}")
    if order not in ("down_up", "up_down"):
        raise ValueError(f"order must be 'down_up' or 'up_down', got {order!r}")
    gen = as_generator(rng)
    state: tuple = ()
    for _ in range(n):
        state = up_step(state, alpha, theta, gen)
    trajectory = [state]
    for _ in range(steps):
        if order == "down_up":
            state = up_step(down_step(state, gen), alpha, theta, gen)
        else:
            state = down_step(up_step(state, alpha, theta, gen), gen)
        trajectory.append(state)
    return trajectory


def embed_composition(sigma) -> GeneralizedIntervalPartition:
    """Unit-mass partition with one block of length sigma_j / n per part.

    Blocks are packed left to right in part order; the empty composition
    maps to the empty partition of mass zero.
    """
    sigma = _check_comp(sigma)
    n = comp_size(sigma)
    if n == 0:
        return empty_partition(0.0)
    rights = np.cumsum(np.asarray(sigma, dtype=np.int64)) / n
    lefts = np.concatenate(([0.0], rights[:-1]))
    return _bare(lefts, rights, 1.0)
