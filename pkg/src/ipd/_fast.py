"""Hot sampling loops with a numba backend and a pure-numpy fallback.

Every function here is a plain-data kernel: scalars and arrays in, arrays
out, with randomness seeded explicitly per call.  Callers hold a
numpy Generator and derive one child seed per kernel invocation, so runs
are reproducible per seed on a fixed backend.  The two backends draw from
the same distributions but use different underlying generators, so results
match in law, not bit for bit.

Backend selection: numba when importable, unless IPD_BACKEND=numpy is set
in the environment.  The numpy fallback is exact but roughly an order of
magnitude slower on the jump-field loops; see benchmarks/backend_bench.py.
"""

from __future__ import annotations

import math
import os

import numpy as np

_ENV_BACKEND = os.environ.get("IPD_BACKEND", "").strip().lower()

if _ENV_BACKEND not in ("", "numba", "numpy"):
    raise RuntimeError(f"IPD_BACKEND must be 'numba' or 'numpy', got {_ENV_BACKEND!r}")

try:
    if _ENV_BACKEND == "numpy":
        raise ImportError
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


BACKEND = "numba" if HAS_NUMBA else "numpy"

# Mersenne seeding in both backends takes 32 bits; the high word of the
# 63-bit child seed buys extra stream separation via a short burn-in.
_SEED_MASK = 0xFFFFFFFF
_BURN_MASK = 0xFF


def split_seed(seed):
    seed = int(seed)
    return seed & _SEED_MASK, (seed >> 32) & _BURN_MASK


def _rs(seed):
    lo, hi = split_seed(seed)
    return np.random.RandomState(np.array([lo, hi], dtype=np.uint32))


# ---------------------------------------------------------------------------
# stick breaking
# ---------------------------------------------------------------------------


@njit(cache=True)
def _sb_masses_nb(alpha, theta, trunc, max_blocks, seed, burn):
    np.random.seed(seed)
    for _ in range(burn):
        np.random.random()
    cap = 1024
    masses = np.empty(cap)
    parents = np.empty(cap, np.int64)
    rem = 1.0
    n = 0
    while rem >= trunc and n < max_blocks:
        w = np.random.beta(theta + (n + 1) * alpha, 1.0 - alpha)
        if n == cap:
            cap *= 2
            nm = np.empty(cap)
            npar = np.empty(cap, np.int64)
            nm[:n] = masses
            npar[:n] = parents
            masses = nm
            parents = npar
        masses[n] = rem * (1.0 - w)
        rem *= w
        if n == 0:
            parents[n] = 0
        else:
            u = np.random.random() * (n * alpha + theta)
            if u < theta:
                parents[n] = 0
            else:
                p = 1 + int((u - theta) / alpha)
                if p > n:
                    p = n
                parents[n] = p
        n += 1
    return masses[:n], parents[:n], rem


def _sb_masses_np(alpha, theta, trunc, max_blocks, seed, burn):
    rs = _rs(seed)
    rs.random_sample(burn)
    masses = []
    parents = []
    rem = 1.0
    n = 0
    chunk = 512
    while rem >= trunc and n < max_blocks:
        j = np.arange(n + 1, n + 1 + chunk, dtype=np.float64)
        w = rs.beta(theta + j * alpha, 1.0 - alpha)
        u = rs.random_sample(chunk)
        stick = rem * np.cumprod(w)
        block = np.empty(chunk)
        block[0] = rem * (1.0 - w[0])
        block[1:] = stick[:-1] * (1.0 - w[1:])
        tot = (j - 1.0) * alpha + theta
        uu = u * tot
        par = np.where(uu < theta, 0, 1 + np.floor((uu - theta) / alpha).astype(np.int64))
        par = np.minimum(par, (j - 1.0).astype(np.int64))
        if n == 0:
            par[0] = 0
        dead = np.nonzero(stick < trunc)[0]
        take = chunk if dead.size == 0 else int(dead[0]) + 1
        take = min(take, max_blocks - n)
        masses.append(block[:take])
        parents.append(par[:take])
        rem = float(stick[take - 1])
        n += take
        chunk = min(chunk * 2, 1 << 16)
    if n == 0:
        return np.empty(0), np.empty(0, np.int64), rem
    return np.concatenate(masses), np.concatenate(parents), rem


def sb_masses(alpha, theta, trunc, max_blocks, seed):
    """Stick-break block masses plus insertion parents; returns (masses,
    parents, undistributed remainder).  parents[k] = 0 places block k+1 at
    the far left, j >= 1 places it immediately right of block j."""
    lo, hi = split_seed(seed)
    if HAS_NUMBA:
        return _sb_masses_nb(alpha, theta, trunc, max_blocks, lo, hi)
    return _sb_masses_np(alpha, theta, trunc, max_blocks, lo, hi)


@njit(cache=True)
def _insertion_order_nb(parents):
    n = parents.shape[0]
    first = np.full(n + 1, -1, np.int64)
    sib = np.full(n + 1, -1, np.int64)
    for j in range(1, n + 1):
        p = parents[j - 1]
        sib[j] = first[p]
        first[p] = j
    order = np.empty(n, np.int64)
    stack = np.empty(n + 1, np.int64)
    top = 0
    node = first[0]
    k = 0
    while node != -1:
        order[k] = node - 1
        k += 1
        child = first[node]
        nxt = sib[node]
        if child != -1:
            if nxt != -1:
                stack[top] = nxt
                top += 1
            node = child
        elif nxt != -1:
            node = nxt
        elif top > 0:
            top -= 1
            node = stack[top]
        else:
            node = -1
    return order


def _insertion_order_np(parents):
    n = parents.shape[0]
    first = np.full(n + 1, -1, np.int64)
    sib = np.full(n + 1, -1, np.int64)
    for j in range(1, n + 1):
        p = parents[j - 1]
        sib[j] = first[p]
        first[p] = j
    order = np.empty(n, np.int64)
    stack = []
    node = first[0]
    k = 0
    while node != -1:
        order[k] = node - 1
        k += 1
        child = first[node]
        nxt = sib[node]
        if child != -1:
            if nxt != -1:
                stack.append(nxt)
            node = child
        elif nxt != -1:
            node = nxt
        elif stack:
            node = stack.pop()
        else:
            node = -1
    return order


def insertion_order(parents):
    """Left-to-right visit order of blocks given their insertion parents.

    Sibling chains are stored newest first, matching insertion on the
    immediate right of the parent (later arrivals sit closer to it)."""
    parents = np.ascontiguousarray(parents, dtype=np.int64)
    if parents.size == 0:
        return np.empty(0, np.int64)
    if HAS_NUMBA:
        return _insertion_order_nb(parents)
    return _insertion_order_np(parents)


# ---------------------------------------------------------------------------
# zero-truncated Poisson and block-size draws for the transition kernel
# ---------------------------------------------------------------------------


@njit(cache=True, inline="always")
def _ztp_draw_nb(m):
    if m > 30.0:
        while True:
            k = np.random.poisson(m)
            if k >= 1:
                return k
    p = m / math.expm1(m)
    u = np.random.random()
    cum = p
    k = 1
    while u > cum and k < 1000:
        k += 1
        p *= m / k
        cum += p
    return k


@njit(cache=True)
def _ztp_gamma_nb(bs, r, alpha, seed, burn):
    np.random.seed(seed)
    for _ in range(burn):
        np.random.random()
    out = np.empty(bs.shape[0])
    for i in range(bs.shape[0]):
        k = _ztp_draw_nb(bs[i] * r)
        out[i] = np.random.gamma(k - alpha, 1.0 / r)
    return out


def _ztp_vec_rs(rates, rs):
    rates = np.asarray(rates, dtype=np.float64)
    k = np.ones(rates.shape[0], dtype=np.int64)
    p = rates / np.expm1(rates)
    big = rates > 30.0
    if np.any(big):
        for i in np.nonzero(big)[0]:
            while True:
                kk = rs.poisson(rates[i])
                if kk >= 1:
                    k[i] = kk
                    break
    u = rs.random_sample(rates.shape[0])
    cum = p.copy()
    active = (u > cum) & ~big
    p = p.copy()
    while np.any(active):
        idx = np.nonzero(active)[0]
        k[idx] += 1
        p[idx] *= rates[idx] / k[idx]
        cum[idx] += p[idx]
        active[idx] = (u[idx] > cum[idx]) & (k[idx] < 1000)
    return k


def _ztp_gamma_np(bs, r, alpha, seed, burn):
    rs = _rs((int(burn) << 32) | int(seed))
    if bs.shape[0] == 0:
        return np.empty(0)
    k = _ztp_vec_rs(bs * r, rs)
    return rs.gamma(k - alpha, 1.0 / r)


def ztp_gamma_batch(bs, r, alpha, seed):
    """One surviving-clade size per entry of bs: Gamma(K - alpha, rate r)
    with K zero-truncated Poisson(bs * r)."""
    bs = np.ascontiguousarray(bs, dtype=np.float64)
    lo, hi = split_seed(seed)
    if HAS_NUMBA:
        return _ztp_gamma_nb(bs, r, alpha, lo, hi)
    return _ztp_gamma_np(bs, r, alpha, lo, hi)


# ---------------------------------------------------------------------------
# squared Bessel grid paths
# ---------------------------------------------------------------------------


@njit(cache=True)
def _besq_fwd_until_nb(dim_half, step, target, max_len, seed, burn):
    np.random.seed(seed)
    for _ in range(burn):
        np.random.random()
    cap = 1024
    path = np.empty(cap)
    x = 0.0
    n = 0
    crossed = False
    while n < max_len:
        lam = x / (2.0 * step)
        k = np.random.poisson(lam) if lam > 0.0 else 0
        x = np.random.gamma(dim_half + k, 2.0 * step)
        if n == cap:
            cap *= 2
            np_ = np.empty(cap)
            np_[:n] = path
            path = np_
        path[n] = x
        n += 1
        if x >= target:
            crossed = True
            break
    return path[:n], crossed


def _besq_fwd_until_np(dim_half, step, target, max_len, seed, burn):
    rs = _rs((int(burn) << 32) | int(seed))
    path = []
    x = 0.0
    crossed = False
    while len(path) < max_len:
        k = rs.poisson(x / (2.0 * step)) if x > 0.0 else 0
        x = rs.gamma(dim_half + k, 2.0 * step)
        path.append(x)
        if x >= target:
            crossed = True
            break
    return np.array(path), crossed


def besq_fwd_until(dim_half, step, target, max_len, seed):
    """Exact grid path of a squared Bessel process started at 0, run until
    it first meets or exceeds target (or max_len steps).  Returns the path
    at times step, 2*step, ... and whether the target was reached."""
    lo, hi = split_seed(seed)
    if HAS_NUMBA:
        return _besq_fwd_until_nb(dim_half, step, target, max_len, lo, hi)
    return _besq_fwd_until_np(dim_half, step, target, max_len, lo, hi)


# ---------------------------------------------------------------------------
# jump-field traversal with per-level block extraction
# ---------------------------------------------------------------------------
#
# One loop serves three constructions that differ only in how the running
# path value x and its running infimum xi combine into an effective height
#     H(t) = h_offset + x(t) - c_inf * xi(t)
# and in the stop rule:
#     stop_mode 0: stop when H hits 0 (clades, perturbed traversal)
#     stop_mode 1: stop when xi hits xi_stop (dust traversal)
# Each jump of size z carries a wide excursion; a query level y is hit
# when H < y < H + z (H taken just before the jump), and the block length
# at y is the excursion bridge evaluated at local height y - H.  Bridge
# values across levels within one jump are drawn jointly, lowest level
# first, via the exact Poisson-Gamma transition of the space-inverted
# bridge, so joint laws across levels are preserved.

_STATUS_OK = 0
_STATUS_CAPPED = 1
_STATUS_OVERFLOW = 2


@njit(cache=True)
def _traverse_nb(
    seed,
    burn,
    alpha,
    jump_rate,
    drift,
    eps,
    x0,
    h_offset,
    c_inf,
    stop_mode,
    xi_stop,
    levels,
    t_cap,
    out_vals,
    out_cnt,
):
    np.random.seed(seed)
    for _ in range(burn):
        np.random.random()
    nlev = levels.shape[0]
    cap_blocks = out_vals.shape[1]
    inv_exp = -1.0 / (1.0 + alpha)
    dim_half = 2.0 + alpha
    x = x0
    xi = x0
    t = 0.0
    njumps = 0
    status = _STATUS_OK
    while True:
        dt = np.random.exponential(1.0 / jump_rate)
        budget = dt
        capped_seg = False
        if t + dt > t_cap:
            budget = t_cap - t
            capped_seg = True
        h = h_offset + x - c_inf * xi
        tau1 = (x - xi) / drift
        if stop_mode == 0:
            if c_inf == 0.0:
                tau_stop = h / drift
            else:
                tau_stop = h / drift
                if tau_stop > tau1:
                    rate2 = drift * (1.0 - c_inf)
                    if rate2 <= 0.0:
                        tau_stop = 1e300
                    else:
                        tau_stop = tau1 + (h - drift * tau1) / rate2
        else:
            tau_stop = tau1 + (xi - xi_stop) / drift
        if tau_stop <= budget:
            t += tau_stop
            return t, njumps, status
        if capped_seg:
            status = _STATUS_CAPPED
            t = t_cap
            return t, njumps, status
        t += dt
        if dt <= tau1:
            x -= drift * dt
        else:
            x -= drift * dt
            xi = x
        z = eps * np.random.random() ** inv_exp
        h = h_offset + x - c_inf * xi
        if nlev > 0 and h < levels[nlev - 1] and levels[0] < h + z:
            prev_u = 0.0
            prev_v = 0.0
            for li in range(nlev):
                y = levels[li]
                if y <= h:
                    continue
                if y >= h + z:
                    break
                s = y - h
                u = s * z / (z - s)
                du = u - prev_u
                lam = prev_v / (2.0 * du)
                k = np.random.poisson(lam) if lam > 0.0 else 0
                v = np.random.gamma(dim_half + k, 2.0 * du)
                w = (z - s) / z
                val = w * w * v
                c = out_cnt[li]
                if c < cap_blocks:
                    out_vals[li, c] = val
                    out_cnt[li] = c + 1
                else:
                    status = _STATUS_OVERFLOW
                prev_u = u
                prev_v = v
        x += z
        njumps += 1


def _traverse_np(
    seed,
    burn,
    alpha,
    jump_rate,
    drift,
    eps,
    x0,
    h_offset,
    c_inf,
    stop_mode,
    xi_stop,
    levels,
    t_cap,
    out_vals,
    out_cnt,
):
    rs = _rs((int(burn) << 32) | int(seed))
    nlev = levels.shape[0]
    cap_blocks = out_vals.shape[1]
    inv_exp = -1.0 / (1.0 + alpha)
    dim_half = 2.0 + alpha
    x = x0
    xi = x0
    t = 0.0
    njumps = 0
    status = _STATUS_OK
    chunk = 4096
    dts = rs.exponential(1.0 / jump_rate, size=chunk)
    zs = eps * rs.random_sample(chunk) ** inv_exp
    ci = 0
    while True:
        if ci == chunk:
            dts = rs.exponential(1.0 / jump_rate, size=chunk)
            zs = eps * rs.random_sample(chunk) ** inv_exp
            ci = 0
        dt = dts[ci]
        budget = dt
        capped_seg = False
        if t + dt > t_cap:
            budget = t_cap - t
            capped_seg = True
        h = h_offset + x - c_inf * xi
        tau1 = (x - xi) / drift
        if stop_mode == 0:
            tau_stop = h / drift
            if c_inf != 0.0 and tau_stop > tau1:
                rate2 = drift * (1.0 - c_inf)
                tau_stop = 1e300 if rate2 <= 0.0 else tau1 + (h - drift * tau1) / rate2
        else:
            tau_stop = tau1 + (xi - xi_stop) / drift
        if tau_stop <= budget:
            return t + tau_stop, njumps, status
        if capped_seg:
            return t_cap, njumps, _STATUS_CAPPED
        t += dt
        x -= drift * dt
        if dt > tau1:
            xi = x
        z = zs[ci]
        ci += 1
        h = h_offset + x - c_inf * xi
        if nlev > 0 and h < levels[nlev - 1] and levels[0] < h + z:
            prev_u = 0.0
            prev_v = 0.0
            for li in range(nlev):
                y = levels[li]
                if y <= h:
                    continue
                if y >= h + z:
                    break
                s = y - h
                u = s * z / (z - s)
                du = u - prev_u
                lam = prev_v / (2.0 * du)
                k = rs.poisson(lam) if lam > 0.0 else 0
                v = rs.gamma(dim_half + k, 2.0 * du)
                w = (z - s) / z
                val = w * w * v
                c = out_cnt[li]
                if c < cap_blocks:
                    out_vals[li, c] = val
                    out_cnt[li] = c + 1
                else:
                    status = _STATUS_OVERFLOW
                prev_u = u
                prev_v = v
        x += z
        njumps += 1


def traverse_jump_field(
    seed,
    alpha,
    eps,
    x0,
    h_offset,
    c_inf,
    stop_mode,
    xi_stop,
    levels,
    t_cap,
    max_blocks_per_level=1 << 16,
):
    """Run one truncated compensated jump path and collect, per query
    level, the excursion bridge values of every straddling jump in time
    order.  Returns (values list per level, end time, jump count, status)
    with status 0 normal stop, 1 time cap hit, 2 block buffer overflow."""
    levels = np.ascontiguousarray(levels, dtype=np.float64)
    rate = jump_rate(alpha, eps)
    drift = compensation_drift(alpha, eps)
    out_vals = np.empty((levels.shape[0], max_blocks_per_level))
    out_cnt = np.zeros(levels.shape[0], dtype=np.int64)
    lo, hi = split_seed(seed)
    fn = _traverse_nb if HAS_NUMBA else _traverse_np
    t_end, njumps, status = fn(
        lo,
        hi,
        alpha,
        rate,
        drift,
        eps,
        float(x0),
        float(h_offset),
        float(c_inf),
        int(stop_mode),
        float(xi_stop),
        levels,
        float(t_cap),
        out_vals,
        out_cnt,
    )
    vals = [np.array(out_vals[i, : out_cnt[i]]) for i in range(levels.shape[0])]
    return vals, float(t_end), int(njumps), int(status)


@njit(cache=True)
def _record_nb(
    seed,
    burn,
    alpha,
    jump_rate,
    drift,
    eps,
    x0,
    step,
    t_cap,
    times,
    sizes,
    births,
    lo_idx,
    val_off,
    vals,
):
    np.random.seed(seed)
    for _ in range(burn):
        np.random.random()
    inv_exp = -1.0 / (1.0 + alpha)
    dim_half = 2.0 + alpha
    max_jumps = times.shape[0]
    max_vals = vals.shape[0]
    x = x0
    t = 0.0
    nj = 0
    nv = 0
    val_off[0] = 0
    while True:
        dt = np.random.exponential(1.0 / jump_rate)
        budget = dt
        capped_seg = False
        if t + dt > t_cap:
            budget = t_cap - t
            capped_seg = True
        tau_stop = x / drift
        if tau_stop <= budget:
            return nj, nv, t + tau_stop, _STATUS_OK
        if capped_seg:
            return nj, nv, t_cap, _STATUS_CAPPED
        t += dt
        x -= drift * dt
        z = eps * np.random.random() ** inv_exp
        if nj >= max_jumps:
            return nj, nv, t, _STATUS_OVERFLOW
        top = x + z
        k_lo = int(np.floor(x / step)) + 1
        k_hi = int(np.ceil(top / step)) - 1
        while k_lo * step <= x:  # guards against rounding at cell edges
            k_lo += 1
        while k_hi * step >= top:
            k_hi -= 1
        if nv + (k_hi - k_lo + 1) > max_vals:
            return nj, nv, t, _STATUS_OVERFLOW
        prev_u = 0.0
        prev_v = 0.0
        for k in range(k_lo, k_hi + 1):
            s = k * step - x
            u = s * z / (z - s)
            du = u - prev_u
            lam = prev_v / (2.0 * du)
            kk = np.random.poisson(lam) if lam > 0.0 else 0
            v = np.random.gamma(dim_half + kk, 2.0 * du)
            w = (z - s) / z
            vals[nv] = w * w * v
            nv += 1
            prev_u = u
            prev_v = v
        times[nj] = t
        sizes[nj] = z
        births[nj] = x
        lo_idx[nj] = k_lo
        val_off[nj + 1] = nv
        nj += 1
        x = top


def _record_np(
    seed,
    burn,
    alpha,
    jump_rate,
    drift,
    eps,
    x0,
    step,
    t_cap,
    times,
    sizes,
    births,
    lo_idx,
    val_off,
    vals,
):
    rs = _rs((int(burn) << 32) | int(seed))
    inv_exp = -1.0 / (1.0 + alpha)
    dim_half = 2.0 + alpha
    max_jumps = times.shape[0]
    max_vals = vals.shape[0]
    x = x0
    t = 0.0
    nj = 0
    nv = 0
    val_off[0] = 0
    chunk = 4096
    dts = rs.exponential(1.0 / jump_rate, size=chunk)
    zs = eps * rs.random_sample(chunk) ** inv_exp
    ci = 0
    while True:
        if ci == chunk:
            dts = rs.exponential(1.0 / jump_rate, size=chunk)
            zs = eps * rs.random_sample(chunk) ** inv_exp
            ci = 0
        dt = dts[ci]
        budget = dt
        capped_seg = False
        if t + dt > t_cap:
            budget = t_cap - t
            capped_seg = True
        tau_stop = x / drift
        if tau_stop <= budget:
            return nj, nv, t + tau_stop, _STATUS_OK
        if capped_seg:
            return nj, nv, t_cap, _STATUS_CAPPED
        t += dt
        x -= drift * dt
        z = zs[ci]
        ci += 1
        if nj >= max_jumps:
            return nj, nv, t, _STATUS_OVERFLOW
        top = x + z
        k_lo = int(np.floor(x / step)) + 1
        k_hi = int(np.ceil(top / step)) - 1
        while k_lo * step <= x:
            k_lo += 1
        while k_hi * step >= top:
            k_hi -= 1
        if nv + (k_hi - k_lo + 1) > max_vals:
            return nj, nv, t, _STATUS_OVERFLOW
        prev_u = 0.0
        prev_v = 0.0
        for k in range(k_lo, k_hi + 1):
            s = k * step - x
            u = s * z / (z - s)
            du = u - prev_u
            lam = prev_v / (2.0 * du)
            kk = rs.poisson(lam) if lam > 0.0 else 0
            v = rs.gamma(dim_half + kk, 2.0 * du)
            w = (z - s) / z
            vals[nv] = w * w * v
            nv += 1
            prev_u = u
            prev_v = v
        times[nj] = t
        sizes[nj] = z
        births[nj] = x
        lo_idx[nj] = k_lo
        val_off[nj + 1] = nv
        nj += 1
        x = top


def record_clade_field(
    seed,
    alpha,
    eps,
    x0,
    level_step,
    t_cap,
    max_jumps=1 << 20,
    max_vals=1 << 21,
):
    """Run one truncated compensated jump path from x0 down to 0 and record
    every jump with its excursion bridge sampled at the straddled multiples
    of level_step.  Returns (times, sizes, births, lo_idx, val_off, vals,
    t_end, status); births are pre-jump heights, lo_idx the grid index of
    each jump's first stored level, val_off offsets into vals."""
    times = np.empty(max_jumps)
    sizes = np.empty(max_jumps)
    births = np.empty(max_jumps)
    lo_idx = np.empty(max_jumps, dtype=np.int64)
    val_off = np.empty(max_jumps + 1, dtype=np.int64)
    vals = np.empty(max_vals)
    lo, hi = split_seed(seed)
    fn = _record_nb if HAS_NUMBA else _record_np
    nj, nv, t_end, status = fn(
        lo,
        hi,
        alpha,
        jump_rate(alpha, eps),
        compensation_drift(alpha, eps),
        eps,
        float(x0),
        float(level_step),
        float(t_cap),
        times,
        sizes,
        births,
        lo_idx,
        val_off,
        vals,
    )
    return (
        times[:nj].copy(),
        sizes[:nj].copy(),
        births[:nj].copy(),
        lo_idx[:nj].copy(),
        val_off[: nj + 1].copy(),
        vals[:nv].copy(),
        float(t_end),
        int(status),
    )


def jump_intensity_const(alpha):
    """C in the jump-size density C * z**(-2-alpha), pinned by the target
    Laplace exponent lam**(1+alpha) / (2**alpha * gamma(1+alpha))."""
    return alpha * (1.0 + alpha) / (
        2.0**alpha * math.gamma(1.0 + alpha) * math.gamma(1.0 - alpha)
    )


def jump_rate(alpha, eps):
    """Total intensity of jumps larger than eps."""
    return jump_intensity_const(alpha) * eps ** (-1.0 - alpha) / (1.0 + alpha)


def compensation_drift(alpha, eps):
    """Downward drift rate balancing the mean of jumps above eps, so the
    truncated path is centred exactly."""
    return jump_intensity_const(alpha) * eps ** (-alpha) / alpha
