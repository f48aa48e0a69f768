"""Radius-limited move neighbourhood, first-improvement descent and the
elite-set bookkeeping that decides which individuals get searched."""

from __future__ import annotations

import time
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from . import _kernels as K
from .instance import Instance


class Tag(IntEnum):
    ELIGIBLE = 0
    INELIGIBLE_PERIODIC = 1
    INELIGIBLE_IMPROVEMENT = 2


class LSMode(IntEnum):
    PERIODIC = 1
    IMPROVEMENT = 2


def move(sigma: Sequence[int], k: int, l: int) -> tuple[int, ...]:
    """Remove the element at position ``k`` and reinsert it at ``l`` (1-based)."""
    n = len(sigma)
    if not (1 <= k <= n and 1 <= l <= n):
        raise IndexError(f"positions {k}, {l} outside 1..{n}")
    out = list(sigma)
    x = out.pop(k - 1)
    out.insert(l - 1, x)
    return tuple(out)


def walk_neighbours(sigma: Sequence[int], k: int, r: int) -> Iterator[tuple[int, ...]]:
    """Sequences evaluated by one scan of position ``k`` (1-based), in order.

    Reference version of the compiled swap walk, kept for inspection.
    """
    n = len(sigma)
    seq = list(sigma)
    l = max(1, k - r)
    seq = list(move(seq, k, l))
    while l <= min(k + r, n):
        if l != k and l != k - 1:
            yield tuple(seq)
        if l + 1 <= n:
            seq[l - 1], seq[l] = seq[l], seq[l - 1]
        l += 1


def encode_like(keys: np.ndarray, sigma0: np.ndarray) -> np.ndarray:
    """Keys that decode to ``sigma0`` (0-based job order), reusing the
    multiset of ``keys`` when it has no ties."""
    n = len(sigma0)
    sorted_keys = np.sort(keys)
    if n > 1 and np.any(sorted_keys[1:] == sorted_keys[:-1]):
        sorted_keys = np.arange(n) / n
    out = np.empty(n)
    out[sigma0] = sorted_keys
    return out


@dataclass
class LSResult:
    keys: np.ndarray
    cmax: int
    improvements: int
    evaluations: int


def move_job_first_improvement(keys, cmax: int, r: int, inst: Instance,
                               deadline: float | None = None) -> LSResult:
    """First-improvement descent over the move neighbourhood of radius ``r``.

    Stops at a local optimum, or early once ``time.perf_counter()`` passes
    ``deadline``.  The result never has a larger makespan than ``cmax``.
    """
    if r < 1:
        raise ValueError(f"radius must be >= 1, got {r}")
    keys = np.asarray(keys, dtype=float)
    n = keys.shape[0]
    order = np.argsort(keys, kind="mergesort").astype(np.int64)
    best = int(cmax)
    improvements = evaluations = 0
    p, off = inst.durations, inst.offsets
    improved = True
    while improved:
        improved = False
        for k in range(n):
            if deadline is not None and time.perf_counter() >= deadline:
                break
            found, c, ev = K.move_scan(order, k, r, best, p, off)
            evaluations += int(ev)
            if found:
                best = int(c)
                improvements += 1
                improved = True
                break
    out = keys.copy() if improvements == 0 else encode_like(keys, order)
    return LSResult(out, best, improvements, evaluations)


def select_eligible(fitness: Sequence[int], tags: Sequence[int], mode: LSMode, b: int = 1,
                    limit: int | None = None) -> list[int]:
    """Indices (0-based, best first) of the individuals to search.

    ``fitness`` must be sorted ascending; only the first ``limit`` entries
    (the elite set) are scanned.  An individual is skipped when its fitness
    equals that of the individual examined just before it, or when its tag
    blocks ``mode``.
    """
    count = 1 if mode == LSMode.PERIODIC else b
    blocked = {Tag.INELIGIBLE_IMPROVEMENT}
    if mode == LSMode.PERIODIC:
        blocked.add(Tag.INELIGIBLE_PERIODIC)
    end = len(fitness) if limit is None else min(limit, len(fitness))
    picked: list[int] = []
    prev = None
    for i in range(end):
        if len(picked) >= count:
            break
        same = prev is not None and fitness[i] == prev
        prev = fitness[i]
        if same or tags[i] in blocked:
            continue
        picked.append(i)
    return picked


def periodic_interval(lambda_pls: float, n: int) -> int:
    return max(1, round(lambda_pls * n))
