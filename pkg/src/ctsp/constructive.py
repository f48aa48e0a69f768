"""Adaptive first-fit constructions and the multi-start population seeder."""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np

from . import _kernels as K
from .decoder import sequence_to_keys
from .instance import Instance
from .schedule import Schedule

RCL_EPS = 1e-9


def seed_job(inst: Instance) -> int:
    """Job with the longest delay; ties go to the longest span, then the lowest id."""
    return min(inst.jobs, key=lambda j: (-j.L, -j.span, j.id)).id


def _build(inst: Instance, first: int, randomized: bool, alpha: float, draws: np.ndarray) -> Schedule:
    order, seq, tau, cmax = K.adaptive(first - 1, inst.durations, inst.offsets, randomized,
                                       float(alpha), draws)
    return Schedule._from_arrays(seq, 2 * inst.n, tau, cmax, job_order=order)


def first_fit_adaptive(inst: Instance) -> Schedule:
    """Greedy construction inserting the cheapest remaining job each round."""
    return _build(inst, seed_job(inst), False, 0.0, np.zeros(inst.n))


def first_fit_adaptive_randomized(inst: Instance, alpha: float, rng: np.random.Generator) -> Schedule:
    """Like :func:`first_fit_adaptive` but with a random seed job and a
    uniform pick among candidates within ``alpha`` of the cheapest."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    draws = rng.random(inst.n)
    first = min(int(draws[0] * inst.n), inst.n - 1) + 1
    return _build(inst, first, True, alpha, draws)


def restricted_candidate_list(costs: Sequence[float], alpha: float) -> list[int]:
    """Indices of the costs lying in ``[cmin, cmin + alpha * (cmax - cmin)]``."""
    lo, hi = min(costs), max(costs)
    limit = lo + alpha * (hi - lo) + RCL_EPS
    return [i for i, c in enumerate(costs) if c <= limit]


def multi_start(inst: Instance, n_msi: int, alpha: float, rng: np.random.Generator) -> list[Schedule]:
    """One adaptive run plus ``n_msi`` randomized runs, best first, without
    repeated job orders."""
    if n_msi < 0:
        raise ValueError(f"n_msi must be >= 0, got {n_msi}")
    found = [first_fit_adaptive(inst)]
    seen = {found[0].job_order}
    for _ in range(n_msi):
        S = first_fit_adaptive_randomized(inst, alpha, rng)
        if S.job_order not in seen:
            seen.add(S.job_order)
            found.append(S)
    found.sort(key=lambda S: S.cmax)
    return found


def warm_count(lambda_ws: float, p: int) -> int:
    return min(p, math.ceil(lambda_ws * p - 1e-12))


def seed_population(solutions: Sequence[Schedule], lambda_ws: float, p: int, n: int,
                    rng: np.random.Generator) -> np.ndarray:
    """``(p, n)`` key matrix: the best ``ceil(lambda_ws * p)`` solutions
    encoded by insertion order, the rest uniform random."""
    if p < 1:
        raise ValueError(f"population size must be >= 1, got {p}")
    if not 0.0 <= lambda_ws <= 1.0:
        raise ValueError(f"lambda_ws must be in [0, 1], got {lambda_ws}")
    m = min(warm_count(lambda_ws, p), len(solutions))
    keys = rng.random((p, n))
    for i, S in enumerate(solutions[:m]):
        keys[i] = sequence_to_keys(S.job_order)
    return keys
