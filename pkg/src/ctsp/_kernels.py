"""Compiled array kernels for first-fit insertion.

Everything here is 0-based: job ``j`` owns tasks ``2j`` (initial) and
``2j + 1`` (final); ``p`` holds task durations and ``off[j] = a_j + L_j``.
A partial schedule is ``(seq, m, tau, cmax)`` where ``seq[:m]`` is the machine
order and ``tau`` the start times (``-1`` when unscheduled).

Candidates are returned as tuples ``(feasible, pos_t1, pos_t2, st, cost)``
with 0-based insertion indices into the unmodified ``seq[:m]``; index ``m``
means append.  Infeasible candidates carry ``cost = INF``.
"""

from __future__ import annotations

import numpy as np
from numba import njit

INF = np.int64(2**62)


@njit(cache=True)
def find_candidate_with_push(j, h, st1, st2, pos, seq, m, tau, p, cmax):
    a = p[2 * j]
    b = p[2 * j + 1]
    idle = tau[seq[pos]] - (st1 + a)
    while h < m - 1:
        cur = seq[h]
        push = tau[cur] + p[cur] - st2
        if push > idle:
            return False, pos, h, st1, INF
        if st2 + push + b <= tau[seq[h + 1]]:
            return True, pos, h + 1, st1 + push, np.int64(0)
        h += 1
    push = cmax - st2
    if push <= idle:
        return True, pos, m, st1 + push, b
    return False, pos, h, st1, INF


@njit(cache=True)
def analyze_insertion_candidate(j, pos, seq, m, tau, p, off, cmax):
    prev = seq[pos - 1]
    st1 = tau[prev] + p[prev]
    a = p[2 * j]
    b = p[2 * j + 1]
    nxt = seq[pos]
    if st1 + a > tau[nxt]:
        return False, pos, pos, st1, INF
    st2 = st1 + off[j]
    if st2 + b <= tau[nxt]:
        return True, pos, pos, st1, np.int64(0)
    if st2 >= cmax:
        return True, pos, m, st1, st2 + b - cmax
    # first task (from pos on) still running at st2; exists because st2 < cmax
    h = pos
    while tau[seq[h]] + p[seq[h]] <= st2:
        h += 1
    if h > pos and st2 + b <= tau[seq[h]]:
        return True, pos, h, st1, np.int64(0)
    return find_candidate_with_push(j, h, st1, st2, pos, seq, m, tau, p, cmax)


@njit(cache=True)
def first_fit_candidate(j, start, seq, m, tau, p, off, cmax):
    """First feasible candidate with the initial task at index >= ``start``,
    falling back to appending the whole job at ``cmax``."""
    for pos in range(start, m):
        ok, p1, p2, st, cost = analyze_insertion_candidate(j, pos, seq, m, tau, p, off, cmax)
        if ok:
            return ok, p1, p2, st, cost
    return True, m, m, cmax, off[j] + p[2 * j + 1]


@njit(cache=True)
def _insert(seq, m, k, x):
    for i in range(m, k, -1):
        seq[i] = seq[i - 1]
    seq[k] = x


@njit(cache=True)
def apply_candidate(j, p1, p2, st, cost, seq, m, tau, off, cmax):
    """Insert job ``j``; returns the new ``(m, cmax)``."""
    tau[2 * j] = st
    tau[2 * j + 1] = st + off[j]
    _insert(seq, m, p2, 2 * j + 1)
    _insert(seq, m + 1, p1, 2 * j)
    return m + 2, cmax + cost


@njit(cache=True)
def first_fit(order, p, off):
    """Decode a job order; returns ``(seq, tau, cmax)``."""
    n = order.shape[0]
    seq = np.empty(2 * n, dtype=np.int64)
    tau = np.full(2 * n, -1, dtype=np.int64)
    j = order[0]
    seq[0] = 2 * j
    seq[1] = 2 * j + 1
    tau[2 * j] = 0
    tau[2 * j + 1] = off[j]
    cmax = off[j] + p[2 * j + 1]
    m = 2
    last = 0
    for i in range(1, n):
        j = order[i]
        ok, p1, p2, st, cost = first_fit_candidate(j, last + 1, seq, m, tau, p, off, cmax)
        m, cmax = apply_candidate(j, p1, p2, st, cost, seq, m, tau, off, cmax)
        last = p1
    return seq, tau, cmax


@njit(cache=True)
def first_fit_makespan(order, p, off):
    return first_fit(order, p, off)[2]


@njit(cache=True)
def decode_many(keys, p, off):
    """Makespan of every row of ``keys`` (ties broken by job index)."""
    out = np.empty(keys.shape[0], dtype=np.int64)
    for r in range(keys.shape[0]):
        order = np.argsort(keys[r], kind="mergesort")
        out[r] = first_fit_makespan(order, p, off)
    return out


@njit(cache=True)
def adaptive(first, p, off, randomized, alpha, draws):
    """Adaptive first-fit construction.

    Each round evaluates the first-fit candidate of every remaining job after
    the last inserted job's initial task.  The deterministic mode keeps the
    first strictly cheapest candidate in ascending job order; the randomized
    mode picks ``draws[i]``-th fraction of the restricted candidate list.
    Returns ``(order, seq, tau, cmax)``.
    """
    n = off.shape[0]
    seq = np.empty(2 * n, dtype=np.int64)
    tau = np.full(2 * n, -1, dtype=np.int64)
    order = np.empty(n, dtype=np.int64)
    remaining = np.ones(n, dtype=np.bool_)
    j = first
    seq[0] = 2 * j
    seq[1] = 2 * j + 1
    tau[2 * j] = 0
    tau[2 * j + 1] = off[j]
    cmax = off[j] + p[2 * j + 1]
    m = 2
    last = 0
    order[0] = j
    remaining[j] = False
    c_ok = np.empty(n, dtype=np.bool_)
    c_p1 = np.empty(n, dtype=np.int64)
    c_p2 = np.empty(n, dtype=np.int64)
    c_st = np.empty(n, dtype=np.int64)
    c_cost = np.empty(n, dtype=np.int64)
    rcl = np.empty(n, dtype=np.int64)
    for i in range(1, n):
        cmin = INF
        cmaxc = -INF
        best = -1
        for jj in range(n):
            if not remaining[jj]:
                continue
            ok, p1, p2, st, cost = first_fit_candidate(jj, last + 1, seq, m, tau, p, off, cmax)
            c_ok[jj] = ok
            c_p1[jj] = p1
            c_p2[jj] = p2
            c_st[jj] = st
            c_cost[jj] = cost
            if cost < cmin:
                cmin = cost
                best = jj
            if cost > cmaxc:
                cmaxc = cost
        if randomized:
            limit = cmin + alpha * (cmaxc - cmin) + 1e-9
            k = 0
            for jj in range(n):
                if remaining[jj] and c_cost[jj] <= limit:
                    rcl[k] = jj
                    k += 1
            pick = int(draws[i] * k)
            if pick >= k:
                pick = k - 1
            best = rcl[pick]
        m, cmax = apply_candidate(best, c_p1[best], c_p2[best], c_st[best], c_cost[best],
                                  seq, m, tau, off, cmax)
        last = c_p1[best]
        order[i] = best
        remaining[best] = False
    return order, seq, tau, cmax


@njit(cache=True)
def _move(order, k, l):
    x = order[k]
    if k < l:
        for i in range(k, l):
            order[i] = order[i + 1]
    else:
        for i in range(k, l, -1):
            order[i] = order[i - 1]
    order[l] = x


@njit(cache=True)
def move_scan(order, k, r, best, p, off):
    """Try every destination of the job at ``k`` within radius ``r`` using the
    incremental swap walk.  On the first improving neighbour ``order`` is left
    as that neighbour and ``(True, cmax, evals)`` is returned; otherwise
    ``order`` is restored and ``(False, best, evals)`` is returned."""
    n = order.shape[0]
    l = max(0, k - r)
    hi = min(k + r, n - 1)
    _move(order, k, l)
    evals = 0
    while l <= hi:
        if l != k and l != k - 1:
            c = first_fit_makespan(order, p, off)
            evals += 1
            if c < best:
                return True, c, evals
        if l + 1 <= n - 1:
            tmp = order[l]
            order[l] = order[l + 1]
            order[l + 1] = tmp
        l += 1
    _move(order, min(l, n - 1), k)
    return False, best, evals
