"""Random-key encoding and the first-fit decoder."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from . import _kernels as K
from .instance import Instance
from .schedule import InsertionCandidate, Schedule


def keys_to_sequence(keys) -> tuple[int, ...]:
    """Jobs (1-based) sorted by ascending key, ties by ascending id."""
    order = np.argsort(np.asarray(keys, dtype=float), kind="stable")
    return tuple(int(j) + 1 for j in order)


def sequence_to_keys(sigma: Sequence[int]) -> np.ndarray:
    """Evenly spaced keys: the job at position ``k`` gets ``(k - 1) / n``."""
    n = len(sigma)
    _check_permutation(sigma, n)
    keys = np.empty(n, dtype=float)
    for k, j in enumerate(sigma):
        keys[j - 1] = k / n
    return keys


def _check_permutation(sigma: Sequence[int], n: int) -> None:
    if sorted(sigma) != list(range(1, n + 1)):
        raise ValueError(f"not a permutation of 1..{n}: {tuple(sigma)}")


def _order0(sigma: Sequence[int], n: int) -> np.ndarray:
    _check_permutation(sigma, n)
    return np.asarray(sigma, dtype=np.int64) - 1


def analyze_insertion_candidate(j: int, pos_t1: int, S: Schedule, inst: Instance) -> InsertionCandidate:
    """Feasibility, cost and final-task position when job ``j``'s initial
    task goes right before the task at ``pos_t1``."""
    m = len(S.sigma_tasks)
    if not 2 <= pos_t1 <= m:
        raise ValueError(f"pos_t1 must be in 2..{m}, got {pos_t1}")
    seq, m, tau = S._arrays(inst)
    res = K.analyze_insertion_candidate(j - 1, pos_t1 - 1, seq, m, tau, inst.durations,
                                        inst.offsets, S.cmax)
    return InsertionCandidate._from_kernel(j - 1, res)


def find_candidate_with_push(j: int, h: int, st_t1: int, st_t2: int, pos_t1: int,
                             S: Schedule, inst: Instance) -> InsertionCandidate:
    """Try to delay job ``j`` inside the idle gap after its initial task so
    that the final task clears the task at position ``h``."""
    seq, m, tau = S._arrays(inst)
    res = K.find_candidate_with_push(j - 1, h - 1, st_t1, st_t2, pos_t1 - 1, seq, m, tau,
                                     inst.durations, S.cmax)
    return InsertionCandidate._from_kernel(j - 1, res)


def first_fit(sigma: Sequence[int], inst: Instance) -> Schedule:
    order = _order0(sigma, inst.n)
    seq, tau, cmax = K.first_fit(order, inst.durations, inst.offsets)
    return Schedule._from_arrays(seq, 2 * inst.n, tau, cmax, job_order=order)


def first_fit_makespan(sigma: Sequence[int], inst: Instance) -> int:
    return int(K.first_fit_makespan(_order0(sigma, inst.n), inst.durations, inst.offsets))


def decode(keys, inst: Instance) -> tuple[Schedule, int]:
    S = first_fit(keys_to_sequence(keys), inst)
    return S, S.cmax


def decode_batch(keys: np.ndarray, inst: Instance) -> np.ndarray:
    """Makespans of every row of a ``(rows, n)`` key matrix."""
    keys = np.ascontiguousarray(keys, dtype=np.float64)
    return K.decode_many(keys, inst.durations, inst.offsets)
