"""Composition calculus: ordered moment polynomials of interval
partitions, their ones-expansions, and the closed-form action of the
evolution's generator on both families.

Compositions are tuples of integers >= 1; () is the empty composition.
"""

from __future__ import annotations

import math

import numpy as np

MASS_TOL = 1e-9


class IndexOutOfRange(ValueError):
    pass


class NonUnitMass(ValueError):
    pass


class BadComposition(ValueError):
    pass


def _check_comp(sigma):
    sigma = tuple(int(s) for s in sigma)
    if any(s < 1 for s in sigma):
        raise BadComposition(f"parts must be >= 1, got {sigma}")
    return sigma


def comp_size(sigma):
    return sum(sigma)


def remove_box(sigma, j):
    """Decrement part j (1-indexed) if it is >= 2, delete it if it is 1."""
    sigma = _check_comp(sigma)
    if not 1 <= j <= len(sigma):
        raise IndexOutOfRange(f"j={j} outside 1..{len(sigma)}")
    s = sigma[j - 1]
    if s >= 2:
        return sigma[: j - 1] + (s - 1,) + sigma[j:]
    return sigma[: j - 1] + sigma[j:]


def compositions_of(k):
    """All compositions of k in lexicographic-by-construction order."""
    if k == 0:
        return [()]
    out = []

    def rec(remaining, prefix):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for first in range(1, remaining + 1):
            rec(remaining - first, prefix + [first])

    rec(k, [])
    return out


def m_circ(sigma, beta):
    """Sum over strictly increasing block tuples of the product of block
    lengths raised to the parts of sigma; the empty composition gives 1."""
    sigma = _check_comp(sigma)
    k = len(sigma)
    if k == 0:
        return 1.0
    lengths = beta.lengths
    if lengths.size < k:
        return 0.0
    acc = lengths ** sigma[-1]
    for j in range(k - 2, -1, -1):
        suffix = np.empty_like(acc)
        suffix[-1] = 0.0
        suffix[:-1] = np.cumsum(acc[::-1])[::-1][1:]
        acc = lengths ** sigma[j] * suffix
    return float(acc.sum())


def ones_expansion(k):
    """Coefficient map of the all-ones moment in terms of coarser ones:
    m of (1,...,1) [k ones] = sum over compositions rho of k of
    coeff[rho] * m_rho, where the empty key carries the constant (the
    moment of the empty composition is 1)."""
    if k < 2:
        raise BadComposition(f"expansion needs k >= 2, got {k}")
    coeffs = {(): 1.0 / math.factorial(k)}
    ones = (1,) * k
    for rho in compositions_of(k):
        if rho == ones:
            continue
        coeffs[rho] = -1.0 / math.prod(math.factorial(p) for p in rho)
    return coeffs


def _check_unit_mass(beta):
    if abs(beta.mass - 1.0) > MASS_TOL:
        raise NonUnitMass(f"generator formulas need total mass 1, got {beta.mass}")


def generator_circ(sigma, beta, alpha, theta):
    """Closed-form generator action on the ordered moment of sigma:
    a diagonal term, a decrement term per part >= 2, and a deletion term
    per part equal to 1 whose weight is theta at the leftmost position
    and alpha elsewhere."""
    sigma = _check_comp(sigma)
    _check_unit_mass(beta)
    n = comp_size(sigma)
    out = -n * (n - 1 + theta) * m_circ(sigma, beta)
    for j, s in enumerate(sigma, start=1):
        if s >= 2:
            out += s * (s - 1 - alpha) * m_circ(remove_box(sigma, j), beta)
        else:
            eta = theta if j == 1 else alpha
            out += eta * m_circ(remove_box(sigma, j), beta)
    return out


def _star_decompose(sigma):
    """Split sigma into (ell0, slots, runs): ell0 leading ones, then for
    each part >= 2 (a slot) the length of the run of ones after it."""
    ell0 = 0
    i = 0
    while i < len(sigma) and sigma[i] == 1:
        ell0 += 1
        i += 1
    slots = []
    runs = []
    while i < len(sigma):
        slots.append(sigma[i])
        i += 1
        run = 0
        while i < len(sigma) and sigma[i] == 1:
            run += 1
            i += 1
        runs.append(run)
    return ell0, tuple(slots), tuple(runs)


def _mstar_slotted(ell0, slots, runs, beta):
    """Sum over strictly increasing block tuples, one block per slot, of
    the slot powers of the chosen lengths times powers of the block mass
    lying before, between and after them (exponents ell0 and runs)."""
    lengths = beta.lengths
    n = lengths.size
    p = len(slots)
    prefix = np.concatenate([[0.0], np.cumsum(lengths)])
    total = prefix[-1]
    if p == 0:
        return float(total**ell0)
    if n < p:
        return 0.0
    # g[i] = sum over choices with the latest slot at block i (0-based) of
    # everything up to and including that slot's power
    exps = (ell0,) + runs[:-1]
    g = lengths ** slots[0] * prefix[:-1] ** ell0
    for j in range(1, p):
        ell = exps[j]
        # (prefix[i] - prefix[i'+1])^ell expanded binomially with running
        # sums of g * prefix^t over i' < i
        new_g = np.zeros(n)
        run_sums = np.zeros(ell + 1)
        for i in range(1, n):
            for t in range(ell + 1):
                run_sums[t] += g[i - 1] * prefix[i] ** t
            acc = 0.0
            for t in range(ell + 1):
                acc += (
                    math.comb(ell, t)
                    * (-1.0) ** t
                    * prefix[i] ** (ell - t)
                    * run_sums[t]
                )
            new_g[i] = lengths[i] ** slots[j] * acc
        g = new_g
    return float(np.sum(g * (total - prefix[1:]) ** runs[-1]))


def m_star(sigma, beta):
    """Variant moment where each run of ones contributes the full block
    mass of the region between the chosen blocks rather than one block;
    agrees with m_circ when sigma has no two consecutive ones."""
    sigma = _check_comp(sigma)
    return _mstar_slotted(*_star_decompose(sigma), beta)


def generator_star(sigma, beta, alpha, theta):
    """Closed-form generator action on m_star.  Decrementing a slot keeps
    it a designated block power even when it drops to 1, matching the
    linear expansion of m_star over the ordered moments."""
    sigma = _check_comp(sigma)
    _check_unit_mass(beta)
    ell0, slots, runs = _star_decompose(sigma)
    n = comp_size(sigma)
    out = -n * (n - 1 + theta) * _mstar_slotted(ell0, slots, runs, beta)
    if ell0 >= 1:
        out += (
            ell0
            * (ell0 - 1 + theta)
            * _mstar_slotted(ell0 - 1, slots, runs, beta)
        )
    for j, s in enumerate(slots):
        dec = slots[:j] + (s - 1,) + slots[j + 1 :]
        out += s * (s - 1 - alpha) * _mstar_slotted(ell0, dec, runs, beta)
        if runs[j] >= 1:
            shrunk = runs[:j] + (runs[j] - 1,) + runs[j + 1 :]
            out += (
                runs[j]
                * (runs[j] - 1 + alpha)
                * _mstar_slotted(ell0, slots, shrunk, beta)
            )
    return out
