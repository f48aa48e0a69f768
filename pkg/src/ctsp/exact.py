"""Exact optimum for tiny instances and the best schedule the decoder can reach.

``solve_exact`` searches over machine task orders.  For a fixed order the
earliest start times solve a system of difference constraints (chain
precedences plus the exact delays), computed by longest-path relaxation; a
positive cycle means the order admits no schedule.
"""

from __future__ import annotations

import itertools
import time
from collections.abc import Iterator, Sequence
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .instance import Instance, upper_bound
from .schedule import Schedule

EXACT_MAX_N = 6
BEST_FF_MAX_N = 8
NONE = -1  # start of a task not yet placed


class OracleLimitError(ValueError):
    """The instance is too large for the requested oracle."""


def enumerate_task_sequences(n: int) -> Iterator[tuple[int, ...]]:
    """Every task order (1-based ids) in which each ``2j - 1`` precedes ``2j``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    seq: list[int] = []
    state = [0] * (n + 1)  # 0 unplaced, 1 initial placed, 2 done

    def rec() -> Iterator[tuple[int, ...]]:
        if len(seq) == 2 * n:
            yield tuple(seq)
            return
        for j in range(1, n + 1):
            if state[j] < 2:
                seq.append(2 * j - 1 + state[j])
                state[j] += 1
                yield from rec()
                state[j] -= 1
                seq.pop()

    yield from rec()


def _earliest_starts(seq: Sequence[int], p: np.ndarray, off: np.ndarray, s: list[int]) -> bool:
    """Raise ``s`` (indexed by 0-based task) to the least solution for the
    order ``seq`` (0-based tasks).  Returns False on a positive cycle."""
    k = len(seq)
    for _ in range(k + 1):
        changed = False
        for i, t in enumerate(seq):
            if i:
                prev = seq[i - 1]
                need = s[prev] + p[prev]
                if s[t] < need:
                    s[t] = need
                    changed = True
            j = t >> 1
            if t & 1:
                if s[t - 1] < s[t] - off[j]:
                    s[t - 1] = s[t] - off[j]
                    changed = True
            elif s[t + 1] >= 0 and s[t + 1] < s[t] + off[j]:
                s[t + 1] = s[t] + off[j]
                changed = True
        if not changed:
            return True
    return False


def min_makespan_for_sequence(seq: Sequence[int], inst: Instance) -> int | None:
    """Smallest makespan of a schedule following task order ``seq``, or None."""
    _check_task_sequence(seq, inst.n)
    r = _solve_sequence([h - 1 for h in seq], inst)
    return None if r is None else r[0]


def _check_task_sequence(seq: Sequence[int], n: int) -> None:
    pos = {h: i for i, h in enumerate(seq)}
    if sorted(seq) != list(range(1, 2 * n + 1)):
        raise ValueError(f"not an ordering of tasks 1..{2 * n}")
    if any(pos[2 * j - 1] > pos[2 * j] for j in range(1, n + 1)):
        raise ValueError("each initial task must precede its final task")


def _solve_sequence(seq0: list[int], inst: Instance) -> tuple[int, list[int]] | None:
    p = inst.durations.tolist()
    off = inst.offsets.tolist()
    s = [NONE] * (2 * inst.n)
    for t in seq0:
        s[t] = 0
    if not _earliest_starts(seq0, p, off, s):
        return None
    last = seq0[-1]
    return s[last] + p[last], s


@dataclass
class ExactResult:
    makespan: int
    schedule: Schedule
    optimal: bool
    nodes: int
    elapsed: float


def solve_exact(inst: Instance, max_n: int = EXACT_MAX_N, time_limit: float | None = None) -> ExactResult:
    """Minimum makespan by branch and bound over task orders.

    If ``time_limit`` runs out the best schedule found so far is returned
    with ``optimal=False``.
    """
    n = inst.n
    if n > max_n:
        raise OracleLimitError(f"exact search is capped at n <= {max_n}, got n = {n}")
    p = inst.durations.tolist()
    off = inst.offsets.tolist()
    span = [j.span for j in inst.jobs]
    # jobs with identical data are interchangeable: open them in id order
    twin_before = [-1] * n
    for j in range(n):
        for i in range(j - 1, -1, -1):
            if inst.jobs[i].a == inst.jobs[j].a and inst.jobs[i].L == inst.jobs[j].L and inst.jobs[i].b == inst.jobs[j].b:
                twin_before[j] = i
                break
    t0 = time.perf_counter()
    deadline = None if time_limit is None else t0 + time_limit
    # incumbent: jobs back to back, makespan UB
    seq0 = list(range(2 * n))
    starts0, t = [0] * (2 * n), 0
    for j in range(n):
        starts0[2 * j], starts0[2 * j + 1] = t, t + off[j]
        t += span[j]
    best = [upper_bound(inst), (seq0, starts0)]
    nodes = 0
    timed_out = False
    seq: list[int] = []
    state = [0] * n
    remaining = [sum(p)]

    def lower_bound(s: list[int]) -> int:
        last = seq[-1]
        end = s[last] + p[last]
        lb = end + remaining[0]
        for j in range(n):
            if state[j] == 1:
                lb = max(lb, s[2 * j] + off[j] + p[2 * j + 1])
            elif state[j] == 0:
                lb = max(lb, end + span[j])
        return lb

    def rec(s: list[int]) -> None:
        nonlocal nodes, timed_out
        nodes += 1
        if deadline is not None and nodes % 1024 == 0 and time.perf_counter() > deadline:
            timed_out = True
        if timed_out:
            return
        if len(seq) == 2 * n:
            last = seq[-1]
            cmax = s[last] + p[last]
            if cmax < best[0]:
                best[0], best[1] = cmax, (list(seq), list(s))
            return
        # closing an open job first tends to find good incumbents early
        choices = [2 * j + 1 for j in range(n) if state[j] == 1]
        choices += [2 * j for j in range(n) if state[j] == 0 and (twin_before[j] < 0 or state[twin_before[j]] > 0)]
        for t in choices:
            j = t >> 1
            s2 = list(s)
            if seq:
                s2[t] = s[seq[-1]] + p[seq[-1]]
            else:
                s2[t] = 0
            seq.append(t)
            state[j] += 1
            remaining[0] -= p[t]
            if _earliest_starts(seq, p, off, s2) and lower_bound(s2) < best[0]:
                rec(s2)
            remaining[0] += p[t]
            state[j] -= 1
            seq.pop()

    rec([NONE] * (2 * n))
    order, starts = best[1]
    tau = np.asarray(starts, dtype=np.int64)
    tau -= tau.min()
    sched = Schedule(tau, [t + 1 for t in order], int(best[0]))
    return ExactResult(int(best[0]), sched, not timed_out, nodes, time.perf_counter() - t0)


def best_first_fit(inst: Instance, max_n: int = BEST_FF_MAX_N) -> tuple[int, tuple[int, ...]]:
    """Best decoder makespan over all job orders, with the lexicographically
    smallest order attaining it."""
    n = inst.n
    if n > max_n:
        raise OracleLimitError(f"exhaustive first-fit is capped at n <= {max_n}, got n = {n}")
    p, off = inst.durations, inst.offsets
    best, witness = None, None
    for perm in itertools.permutations(range(n)):
        c = int(K.first_fit_makespan(np.array(perm, dtype=np.int64), p, off))
        if best is None or c < best:
            best, witness = c, perm
    return best, tuple(j + 1 for j in witness)
