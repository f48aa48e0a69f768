"""Problem instances: jobs ``(a, L, b)`` on a single machine.

Each job ``j`` (1-based) consists of an initial task of length ``a`` and a
final task of length ``b`` that must start exactly ``a + L`` time units after
the initial task starts.  Tasks are numbered ``2j - 1`` (initial) and ``2j``
(final).

The native file format is::

    n
    a_1 L_1 b_1
    ...
    a_n L_n b_n
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

CATEGORIES: dict[str, tuple[tuple[int, int], tuple[int, int]]] = {
    # category: ((min, max) of a and b, (min, max) of L)
    "S": ((1, 20), (10, 80)),
    "M": ((1, 50), (25, 200)),
    "L": ((1, 100), (50, 400)),
}


class InstanceFormatError(ValueError):
    """Raised when instance text cannot be parsed."""


@dataclass(frozen=True)
class Job:
    id: int
    a: int
    L: int
    b: int

    def __post_init__(self) -> None:
        if min(self.a, self.L, self.b) < 0:
            raise ValueError(f"job {self.id}: negative duration in {(self.a, self.L, self.b)}")

    @property
    def span(self) -> int:
        return self.a + self.L + self.b


@dataclass(frozen=True)
class Instance:
    """Immutable job set.  Equality ignores the name label."""

    name: str = field(compare=False)
    jobs: tuple[Job, ...] = ()

    def __post_init__(self) -> None:
        if not self.jobs:
            raise ValueError("an instance needs at least one job")
        for k, job in enumerate(self.jobs, start=1):
            if job.id != k:
                raise ValueError(f"job ids must be 1..n in order, got {job.id} at index {k}")

    @classmethod
    def from_triples(cls, triples, name: str = "instance") -> Instance:
        return cls(name, tuple(Job(k, int(a), int(L), int(b)) for k, (a, L, b) in enumerate(triples, start=1)))

    @property
    def n(self) -> int:
        return len(self.jobs)

    def triples(self) -> list[tuple[int, int, int]]:
        return [(j.a, j.L, j.b) for j in self.jobs]

    # Array views used by the compiled kernels.  Task t (0-based) belongs to
    # job t // 2; even t is the initial task.
    @cached_property
    def durations(self) -> np.ndarray:
        p = np.empty(2 * self.n, dtype=np.int64)
        p[0::2] = [j.a for j in self.jobs]
        p[1::2] = [j.b for j in self.jobs]
        p.setflags(write=False)
        return p

    @cached_property
    def offsets(self) -> np.ndarray:
        """Start-to-start distance ``a + L`` between the two tasks of each job."""
        off = np.array([j.a + j.L for j in self.jobs], dtype=np.int64)
        off.setflags(write=False)
        return off

    @cached_property
    def delays(self) -> np.ndarray:
        d = np.array([j.L for j in self.jobs], dtype=np.int64)
        d.setflags(write=False)
        return d


def upper_bound(inst: Instance) -> int:
    """Makespan of scheduling every job back to back without interleaving."""
    return sum(j.span for j in inst.jobs)


def task_duration(inst: Instance, h: int) -> int:
    """Processing time of task ``h`` (1-based; odd = initial, even = final)."""
    if not 1 <= h <= 2 * inst.n:
        raise IndexError(f"task id {h} outside 1..{2 * inst.n}")
    job = inst.jobs[(h - 1) // 2]
    return job.a if h % 2 == 1 else job.b


def parse_instance(text: str, name: str = "instance") -> Instance:
    lines = text.splitlines()
    # tolerate trailing blank lines only
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise InstanceFormatError("line 1: empty input, expected job count")
    header = lines[0].split()
    if len(header) != 1:
        raise InstanceFormatError("line 1: expected a single integer job count")
    try:
        n = int(header[0])
    except ValueError:
        raise InstanceFormatError(f"line 1: job count {header[0]!r} is not an integer") from None
    if n < 1:
        raise InstanceFormatError(f"line 1: job count must be >= 1, got {n}")
    body = lines[1:]
    triples = []
    for lineno, line in enumerate(body, start=2):
        tokens = line.split()
        if len(tokens) != 3:
            raise InstanceFormatError(f"line {lineno}: expected 3 integers")
        try:
            values = [int(tok) for tok in tokens]
        except ValueError:
            raise InstanceFormatError(f"line {lineno}: non-integer token in {line.strip()!r}") from None
        if min(values) < 0:
            raise InstanceFormatError(f"line {lineno}: negative value in {line.strip()!r}")
        triples.append(values)
    if len(triples) != n:
        raise InstanceFormatError(f"line {len(lines) + 1}: header announces {n} jobs, found {len(triples)}")
    return Instance.from_triples(triples, name=name)


def write_instance(inst: Instance) -> str:
    rows = [str(inst.n)] + [f"{j.a} {j.L} {j.b}" for j in inst.jobs]
    return "\n".join(rows) + "\n"


def load_instance(path: str | Path) -> Instance:
    path = Path(path)
    return parse_instance(path.read_text(encoding="utf-8"), name=path.stem)


def save_instance(inst: Instance, path: str | Path) -> None:
    Path(path).write_text(write_instance(inst), encoding="utf-8")


def normalize_category(category: str) -> str:
    cat = category.strip().upper()
    if cat not in CATEGORIES:
        raise ValueError(f"unknown category {category!r}; expected one of {sorted(CATEGORIES)}")
    return cat


def generate_instance(n: int, category: str, seed: int, name: str | None = None) -> Instance:
    """Draw ``n`` jobs from the discrete uniform ranges of ``category``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    cat = normalize_category(category)
    (lo_ab, hi_ab), (lo_l, hi_l) = CATEGORIES[cat]
    rng = np.random.default_rng(seed)
    a = rng.integers(lo_ab, hi_ab, size=n, endpoint=True)
    L = rng.integers(lo_l, hi_l, size=n, endpoint=True)
    b = rng.integers(lo_ab, hi_ab, size=n, endpoint=True)
    if name is None:
        name = f"{n}_s{seed}_{cat}_gen"
    return Instance.from_triples(zip(a.tolist(), L.tolist(), b.tolist()), name=name)


def batch_name(n: int, idx: int, category: str) -> str:
    return f"{n}_{idx}_{normalize_category(category)}_gen"
