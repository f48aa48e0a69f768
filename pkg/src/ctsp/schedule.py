"""Schedules, insertion candidates and feasibility checking.

Task ids and machine positions are 1-based at this level.  Tasks occupy
half-open intervals ``[start, start + p)``, so a task ending at ``t`` and a
task starting at ``t`` do not conflict and zero-length tasks never overlap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .instance import Instance

UNSCHEDULED = int(np.iinfo(np.int64).min)


@dataclass
class Schedule:
    """A (possibly partial) single-machine schedule.

    ``tau[h - 1]`` is the start of task ``h`` or ``UNSCHEDULED``;
    ``sigma_tasks`` is the machine order; ``job_order`` records the order in
    which jobs were inserted, when known.
    """

    tau: np.ndarray
    sigma_tasks: list[int]
    cmax: int
    job_order: tuple[int, ...] | None = field(default=None, compare=False)

    def start(self, h: int) -> int:
        return int(self.tau[h - 1])

    def is_complete(self, inst: Instance) -> bool:
        return len(self.sigma_tasks) == 2 * inst.n

    def starts(self) -> dict[int, int]:
        return {h: int(self.tau[h - 1]) for h in self.sigma_tasks}

    def copy(self) -> Schedule:
        return Schedule(self.tau.copy(), list(self.sigma_tasks), self.cmax, self.job_order)

    # kernel-facing views (0-based)
    def _arrays(self, inst: Instance) -> tuple[np.ndarray, int, np.ndarray]:
        seq = np.zeros(2 * inst.n, dtype=np.int64)
        m = len(self.sigma_tasks)
        seq[:m] = np.asarray(self.sigma_tasks, dtype=np.int64) - 1
        return seq, m, np.asarray(self.tau, dtype=np.int64).copy()

    @classmethod
    def _from_arrays(cls, seq: np.ndarray, m: int, tau: np.ndarray, cmax: int,
                     job_order=None) -> Schedule:
        tau = np.where(tau < 0, UNSCHEDULED, tau).astype(np.int64)
        return cls(tau, [int(t) + 1 for t in seq[:m]], int(cmax),
                   None if job_order is None else tuple(int(j) + 1 for j in job_order))


@dataclass(frozen=True)
class InsertionCandidate:
    """A placement of job ``j``: initial task inserted before the task
    currently at ``pos_t1``, final task before the task currently at
    ``pos_t2`` (``len(sigma) + 1`` means append), starting at ``st``."""

    j: int
    feasible: bool
    pos_t1: int
    pos_t2: int
    st: int
    cost: int | float  # math.inf when infeasible

    @classmethod
    def _from_kernel(cls, j0: int, res) -> InsertionCandidate:
        ok, p1, p2, st, cost = res
        return cls(j0 + 1, bool(ok), int(p1) + 1, int(p2) + 1, int(st),
                   int(cost) if ok else math.inf)


def new_partial(inst: Instance, j: int) -> Schedule:
    """Schedule containing only job ``j`` (1-based), started at time 0."""
    if not 1 <= j <= inst.n:
        raise IndexError(f"job {j} outside 1..{inst.n}")
    job = inst.jobs[j - 1]
    tau = np.full(2 * inst.n, UNSCHEDULED, dtype=np.int64)
    tau[2 * j - 2] = 0
    tau[2 * j - 1] = job.a + job.L
    return Schedule(tau, [2 * j - 1, 2 * j], job.span, job_order=(j,))


def apply_candidate(S: Schedule, C: InsertionCandidate, inst: Instance) -> Schedule:
    """Return a new schedule with ``C`` applied; ``S`` is left untouched."""
    if not C.feasible:
        raise ValueError(f"cannot apply infeasible candidate for job {C.j}")
    if S.tau[2 * C.j - 2] != UNSCHEDULED:
        raise ValueError(f"job {C.j} is already scheduled")
    m = len(S.sigma_tasks)
    if not (1 <= C.pos_t1 <= C.pos_t2 <= m + 1):
        raise ValueError(f"bad positions {C.pos_t1}, {C.pos_t2} for a sequence of length {m}")
    seq, m, tau = S._arrays(inst)
    m, cmax = K.apply_candidate(C.j - 1, C.pos_t1 - 1, C.pos_t2 - 1, C.st, int(C.cost),
                                seq, m, tau, inst.offsets, S.cmax)
    order = None if S.job_order is None else S.job_order + (C.j,)
    out = Schedule._from_arrays(seq, m, tau, cmax)
    out.job_order = order
    return out


def makespan(S: Schedule, inst: Instance) -> int:
    """Recompute the makespan from start times alone."""
    p = inst.durations
    return max((int(S.tau[h - 1]) + int(p[h - 1]) for h in S.sigma_tasks), default=0)


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: tuple

    def __str__(self) -> str:
        return f"{self.kind}{self.detail}"


def validate(S: Schedule, inst: Instance, complete: bool = False) -> list[Violation]:
    """Every broken schedule invariant; an empty list means the schedule is valid."""
    out: list[Violation] = []
    n = inst.n
    p = inst.durations
    seen: set[int] = set()
    for h in S.sigma_tasks:
        if not 1 <= h <= 2 * n:
            out.append(Violation("unknown-task", (h,)))
        elif h in seen:
            out.append(Violation("duplicate-task", (h,)))
        seen.add(h)
    if out:
        return out
    for h in range(1, 2 * n + 1):
        scheduled = S.tau[h - 1] != UNSCHEDULED
        partner = h + 1 if h % 2 else h - 1
        if h in seen and partner not in seen:
            out.append(Violation("missing-task", (partner,)))
        elif scheduled and h not in seen:
            out.append(Violation("unsequenced-task", (h,)))
        elif h in seen and not scheduled:
            out.append(Violation("missing-start", (h,)))
    if complete and len(seen) != 2 * n:
        out.extend(Violation("missing-task", (h,)) for h in range(1, 2 * n + 1) if h not in seen)
    if any(v.kind == "missing-start" for v in out):
        return out

    for h in S.sigma_tasks:
        if S.tau[h - 1] < 0:
            out.append(Violation("negative-start", (h,)))

    # exact delay
    for j in range(1, n + 1):
        if 2 * j - 1 in seen and 2 * j in seen:
            job = inst.jobs[j - 1]
            if S.tau[2 * j - 1] - S.tau[2 * j - 2] != job.a + job.L:
                out.append(Violation("delay-mismatch", (j,)))

    # pairwise overlap via a sweep over positive-length tasks sorted by start
    spans = sorted((int(S.tau[h - 1]), int(S.tau[h - 1] + p[h - 1]), h)
                   for h in S.sigma_tasks if p[h - 1] > 0)
    active: list[tuple[int, int]] = []
    for s, e, h in spans:
        active = [(ae, ah) for ae, ah in active if ae > s]
        for _, ah in active:
            out.append(Violation("overlap", (min(ah, h), max(ah, h))))
        active.append((e, h))

    # machine order must agree with start times
    for g, h in zip(S.sigma_tasks, S.sigma_tasks[1:]):
        if S.tau[h - 1] < S.tau[g - 1] + p[g - 1]:
            out.append(Violation("order-inconsistency", (g, h)))

    recomputed = makespan(S, inst)
    if recomputed != S.cmax:
        out.append(Violation("cmax-mismatch", (S.cmax, recomputed)))
    return out


def is_valid(S: Schedule, inst: Instance, complete: bool = True) -> bool:
    return not validate(S, inst, complete=complete)


def dump_schedule(S: Schedule, inst: Instance) -> str:
    """One line per machine position: ``pos task job role start end``."""
    p = inst.durations
    lines = []
    for pos, h in enumerate(S.sigma_tasks, start=1):
        role = "start" if h % 2 else "final"
        st = int(S.tau[h - 1])
        lines.append(f"{pos} {h} {(h + 1) // 2} {role} {st} {st + int(p[h - 1])}")
    return "\n".join(lines) + "\n"


def parse_schedule_dump(text: str, inst: Instance) -> Schedule:
    """Inverse of :func:`dump_schedule`; the makespan is taken as the largest end."""
    tau = np.full(2 * inst.n, UNSCHEDULED, dtype=np.int64)
    sigma: list[int] = []
    cmax = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 6:
            raise ValueError(f"line {lineno}: expected 'pos task job role start end'")
        pos, h, j, role, st, end = parts
        h, st, end = int(h), int(st), int(end)
        if int(pos) != len(sigma) + 1:
            raise ValueError(f"line {lineno}: positions must be consecutive from 1")
        if not 1 <= h <= 2 * inst.n:
            raise ValueError(f"line {lineno}: task {h} outside 1..{2 * inst.n}")
        if int(j) != (h + 1) // 2 or role != ("start" if h % 2 else "final"):
            raise ValueError(f"line {lineno}: job/role do not match task {h}")
        tau[h - 1] = st
        sigma.append(h)
        cmax = max(cmax, end)
    return Schedule(tau, sigma, cmax)
