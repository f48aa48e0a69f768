"""The BRKGA loop with restarts, shakes, injections and local search."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .constructive import multi_start, seed_population
from .decoder import decode_batch, first_fit, keys_to_sequence, sequence_to_keys
from .instance import Instance
from .local_search import LSMode, Tag, move_job_first_improvement, periodic_interval, select_eligible
from .params import BrkgaParams
from .schedule import Schedule

WEAK_RANGE = (0.05, 0.2)
STRONG_RANGE = (0.5, 1.0)


class Action(str, Enum):
    NONE = "none"
    WEAK = "weak"
    STRONG = "strong"
    RESET = "reset"


@dataclass
class Population:
    """Key matrix with fitness and LS tags, kept sorted by fitness."""

    keys: np.ndarray
    fitness: np.ndarray
    tags: np.ndarray

    @classmethod
    def from_keys(cls, keys: np.ndarray, inst: Instance) -> Population:
        keys = np.ascontiguousarray(keys, dtype=np.float64)
        pop = cls(keys, decode_batch(keys, inst), np.zeros(len(keys), dtype=np.int8))
        return pop.sorted()

    def sorted(self) -> Population:
        idx = np.argsort(self.fitness, kind="stable")
        return Population(self.keys[idx], self.fitness[idx], self.tags[idx])

    @property
    def size(self) -> int:
        return len(self.fitness)

    def copy(self) -> Population:
        return Population(self.keys.copy(), self.fitness.copy(), self.tags.copy())


def crossover(elite: np.ndarray, non_elite: np.ndarray, rho_e: float, rng: np.random.Generator) -> np.ndarray:
    """Parametric uniform crossover: each key comes from the elite parent
    with probability ``rho_e``."""
    elite = np.asarray(elite)
    non_elite = np.asarray(non_elite)
    if elite.shape != non_elite.shape:
        raise ValueError(f"parent lengths differ: {elite.shape} vs {non_elite.shape}")
    return np.where(rng.random(elite.shape) < rho_e, elite, non_elite)


def evolve_generation(pop: Population, params: BrkgaParams, rng: np.random.Generator,
                      inst: Instance) -> Population:
    p, n = pop.keys.shape
    ne, nm = params.elite_size, params.mutant_size
    no = p - ne - nm
    a = rng.integers(0, ne, size=no)
    b = rng.integers(ne, p, size=no)
    mutants = rng.random((nm, n))
    children = crossover(pop.keys[a], pop.keys[b], params.rho_e, rng)
    fresh = np.vstack([mutants, children])
    keys = np.vstack([pop.keys[:ne], fresh])
    fitness = np.concatenate([pop.fitness[:ne], decode_batch(fresh, inst)])
    tags = np.concatenate([pop.tags[:ne], np.zeros(p - ne, dtype=np.int8)])
    return Population(keys, fitness, tags).sorted()


def shake_intensity(lambda_shake: float, n: int) -> int:
    return max(1, math.floor(lambda_shake * n + 0.5))


def shake_keys(x: np.ndarray, psi: int, s_type: str, rng: np.random.Generator) -> None:
    """Apply ``psi`` pairs of shake operations to one chromosome in place."""
    n = len(x)
    for _ in range(psi):
        if s_type == "CHANGE":
            i = rng.integers(n)
            x[i] = (1.0 - x[i]) % 1.0
            x[rng.integers(n)] = rng.random()
        else:
            i = rng.integers(n)
            j = (i + 1) % n
            x[i], x[j] = x[j], x[i]
            i, j = rng.integers(n, size=2)
            x[i], x[j] = x[j], x[i]


def shake(pop: Population, lambda_shake: float, s_type: str, rng: np.random.Generator,
          inst: Instance, elite_size: int) -> Population:
    """Perturb every elite chromosome and replace the rest with fresh ones."""
    if not 0 < lambda_shake <= 1:
        raise ValueError(f"lambda_shake must be in (0, 1], got {lambda_shake}")
    p, n = pop.keys.shape
    psi = shake_intensity(lambda_shake, n)
    keys = np.empty_like(pop.keys)
    keys[:elite_size] = pop.keys[:elite_size]
    for row in keys[:elite_size]:
        shake_keys(row, psi, s_type, rng)
    keys[elite_size:] = rng.random((p - elite_size, n))
    return Population.from_keys(keys, inst)


def reset_population(p: int, n: int, rng: np.random.Generator, inst: Instance) -> Population:
    return Population.from_keys(rng.random((p, n)), inst)


def inject(pop: Population, x: np.ndarray, inst: Instance) -> Population:
    """Replace the worst individual with ``x``."""
    out = pop.copy()
    out.keys[-1] = x
    out.fitness[-1] = decode_batch(np.asarray(x, dtype=np.float64)[None, :], inst)[0]
    out.tags[-1] = Tag.ELIGIBLE
    return out.sorted()


def perturbation_action(z: int, homogeneous: bool, params: BrkgaParams) -> Action:
    """Strongest perturbation due after ``z`` iterations without improvement."""
    if not params.has_shake:
        return Action.RESET if z > 0 and z % params.n_nimp == 0 else Action.NONE
    cycle = params.Rstarstar_mult * params.R
    if z > 0 and z % cycle == params.Rstar_mult * params.R:
        return Action.RESET
    if z > 0 and z % cycle == params.R:
        return Action.STRONG
    if homogeneous:
        return Action.WEAK
    return Action.NONE


@dataclass
class InjectionContext:
    inst: Instance
    params: BrkgaParams
    rng: np.random.Generator
    current_best: np.ndarray
    overall_best: np.ndarray
    initial_best: np.ndarray


def injection_source(kind: str, ctx: InjectionContext) -> np.ndarray:
    if kind == "CB":
        return ctx.current_best.copy()
    if kind == "OB":
        return ctx.overall_best.copy()
    if kind == "BI":
        return ctx.initial_best.copy()
    if kind == "BMS":
        best = multi_start(ctx.inst, ctx.params.n_msi, ctx.params.alpha, ctx.rng)[0]
        return sequence_to_keys(best.job_order)
    raise ValueError(f"unknown injection type {kind!r}")


def population_uniqueness(pop: Population) -> tuple[float, float]:
    """Percentages of distinct chromosomes and of distinct decoded job orders."""
    p = pop.size
    chrom = len(np.unique(pop.keys, axis=0))
    orders = np.argsort(pop.keys, axis=1, kind="stable")
    seqs = len(np.unique(orders, axis=0))
    return 100.0 * chrom / p, 100.0 * seqs / p


@dataclass
class StopCriteria:
    time_limit: float | None = 10.0
    max_iterations: int | None = None
    target: int | None = None

    def __post_init__(self) -> None:
        if self.time_limit is None and self.max_iterations is None and self.target is None:
            raise ValueError("at least one stopping criterion is required")


@dataclass
class RunResult:
    makespan: int
    schedule: Schedule
    keys: np.ndarray
    time_to_best: float
    total_time: float
    iterations: int
    restarts: int = 0
    weak_shakes: int = 0
    strong_shakes: int = 0
    ls_calls: int = 0
    seed: int | None = None
    events: list[tuple[int, int, str]] = field(default_factory=list, repr=False)


class _Run:
    def __init__(self, inst: Instance, params: BrkgaParams, stop: StopCriteria, rng: np.random.Generator,
                 trace: list | None = None):
        self.inst, self.params, self.stop, self.rng = inst, params, stop, rng
        self.trace = trace
        self.n = inst.n
        self.t0 = time.perf_counter()
        self.deadline = None if stop.time_limit is None else self.t0 + stop.time_limit
        self.r_ils = params.r_iLS or self.n
        self.period = periodic_interval(params.lambda_pLS, self.n)
        self.res = dict(restarts=0, weak_shakes=0, strong_shakes=0, ls_calls=0)
        self.events: list[tuple[int, int, str]] = []

    def elapsed(self) -> float:
        return time.perf_counter() - self.t0

    def done(self, it: int) -> bool:
        s = self.stop
        if s.target is not None and self.best_fit <= s.target:
            return True
        if s.max_iterations is not None and it >= s.max_iterations:
            return True
        return self.deadline is not None and time.perf_counter() >= self.deadline

    def record(self, pop: Population) -> bool:
        if pop.fitness[0] < self.best_fit:
            self.best_fit = int(pop.fitness[0])
            self.best_keys = pop.keys[0].copy()
            self.time_to_best = self.elapsed()
            return True
        return False

    def local_search(self, pop: Population, mode: LSMode) -> Population:
        ne = self.params.elite_size
        if mode == LSMode.PERIODIC:
            picks, radius, tag = select_eligible(pop.fitness, pop.tags, mode, 1, ne), self.params.r_pLS, Tag.INELIGIBLE_PERIODIC
        else:
            picks, radius, tag = select_eligible(pop.fitness, pop.tags, mode, self.params.b, ne), self.r_ils, Tag.INELIGIBLE_IMPROVEMENT
        if not picks:
            return pop
        pop = pop.copy()
        for i in picks:
            out = move_job_first_improvement(pop.keys[i], int(pop.fitness[i]), radius, self.inst, self.deadline)
            self.res["ls_calls"] += 1
            pop.keys[i] = out.keys
            pop.fitness[i] = out.cmax
            pop.tags[i] = tag
        return pop.sorted()

    def perturb(self, pop: Population, it: int, z: int) -> tuple[Population, Action]:
        prm = self.params
        ne = prm.elite_size
        homogeneous = pop.fitness[0] == pop.fitness[ne - 1]
        action = perturbation_action(z, bool(homogeneous), prm)
        if self.trace is not None:
            self.trace.append((it, z, bool(homogeneous), action.value))
        if action == Action.NONE:
            return pop, action
        current_best = pop.keys[0].copy()
        if action == Action.RESET:
            pop = reset_population(prm.p, self.n, self.rng, self.inst)
            kind = prm.gamma_reset
            self.res["restarts"] += 1
        else:
            lo, hi = WEAK_RANGE if action == Action.WEAK else STRONG_RANGE
            pop = shake(pop, self.rng.uniform(lo, hi), prm.s_type, self.rng, self.inst, ne)
            kind = prm.gamma_weak if action == Action.WEAK else prm.gamma_strong
            self.res["weak_shakes" if action == Action.WEAK else "strong_shakes"] += 1
        ctx = InjectionContext(self.inst, prm, self.rng, current_best, self.best_keys, self.initial_keys)
        pop = inject(pop, injection_source(kind, ctx), self.inst)
        self.events.append((it, z, action.value))
        return pop, action

    def execute(self, seed) -> RunResult:
        prm, inst = self.params, self.inst
        solutions = multi_start(inst, prm.n_msi, prm.alpha, self.rng)
        self.initial_keys = sequence_to_keys(solutions[0].job_order)
        pop = Population.from_keys(seed_population(solutions, prm.lambda_ws, prm.p, self.n, self.rng), inst)
        self.best_fit = int(pop.fitness[0])
        self.best_keys = pop.keys[0].copy()
        self.time_to_best = self.elapsed()
        it = z = 0
        while not self.done(it):
            it += 1
            pop = evolve_generation(pop, prm, self.rng, inst)
            if prm.has_ls and it % self.period == 0:
                pop = self.local_search(pop, LSMode.PERIODIC)
            improved = False
            if pop.fitness[0] < self.best_fit:
                if prm.has_ls:
                    pop = self.local_search(pop, LSMode.IMPROVEMENT)
                improved = self.record(pop)
            z = 0 if improved else z + 1
            pop, action = self.perturb(pop, it, z)
            if action != Action.NONE and self.record(pop):
                z = 0
        schedule = first_fit(keys_to_sequence(self.best_keys), inst)
        return RunResult(self.best_fit, schedule, self.best_keys, self.time_to_best, self.elapsed(), it,
                         seed=seed if isinstance(seed, int) else None, events=self.events, **self.res)


def run(inst: Instance, params: BrkgaParams, stop: StopCriteria | None = None, seed=0,
        trace: list | None = None) -> RunResult:
    """Run one BRKGA variant.  ``seed`` may be an int or a ``SeedSequence``.

    When ``trace`` is a list, one ``(iteration, z, homogeneous_elite, action)``
    tuple is appended per iteration.
    """
    stop = stop or StopCriteria()
    return _Run(inst, params, stop, np.random.default_rng(seed), trace).execute(seed)
