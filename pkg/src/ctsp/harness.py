"""Batch experiments: one BRKGA run per (instance, variant, seed) cell."""

from __future__ import annotations

import csv
import io
import statistics
import zlib
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

import numpy as np

from .brkga import RunResult, StopCriteria, run
from .instance import Instance
from .metrics import rpd
from .params import BrkgaParams, preset

CSV_HEADER = ("instance,variant,seed,makespan,time_to_best_s,total_time_s,"
              "iterations,restarts,weak_shakes,strong_shakes,ls_calls")
SUMMARY_HEADER = "instance,variant,runs,best_makespan,mean_makespan,mean_rpd,std_rpd"


@dataclass
class RunRecord:
    instance: str
    variant: str
    seed: int
    makespan: int | None
    time_to_best_s: float | None = None
    total_time_s: float | None = None
    iterations: int | None = None
    restarts: int | None = None
    weak_shakes: int | None = None
    strong_shakes: int | None = None
    ls_calls: int | None = None
    error: str | None = None

    @classmethod
    def from_result(cls, instance: str, variant: str, seed: int, r: RunResult) -> RunRecord:
        return cls(instance, variant, seed, r.makespan, round(r.time_to_best, 4), round(r.total_time, 4),
                   r.iterations, r.restarts, r.weak_shakes, r.strong_shakes, r.ls_calls)

    def csv_row(self) -> list:
        if self.error is not None:
            return [self.instance, self.variant, self.seed, f"error: {self.error}"] + [""] * 7
        return [getattr(self, f.name) for f in fields(self) if f.name != "error"]


@dataclass
class SummaryRow:
    instance: str
    variant: str
    runs: int
    best_makespan: int
    mean_makespan: float
    mean_rpd: float
    std_rpd: float


def run_rng_seed(seed: int, instance_name: str) -> np.random.SeedSequence:
    """Per-cell seed that does not depend on the order cells are executed in."""
    return np.random.SeedSequence([seed, zlib.crc32(instance_name.encode("utf-8"))])


@dataclass
class Cell:
    name: str
    instance: Instance | None
    variant: str
    seed: int
    params: BrkgaParams | None
    stop: StopCriteria
    error: str | None = None


def run_cell(cell: Cell) -> RunRecord:
    if cell.error is not None or cell.instance is None or cell.params is None:
        return RunRecord(cell.name, cell.variant, cell.seed, None, error=cell.error or "no instance")
    r = run(cell.instance, cell.params, cell.stop, run_rng_seed(cell.seed, cell.name))
    return RunRecord.from_result(cell.name, cell.variant, cell.seed, r)


def variant_params(variant: str, overrides: dict[str, str] | None = None) -> BrkgaParams:
    params = preset(variant)
    extra = {k: v for k, v in (overrides or {}).items() if k != "variant"}
    return params.with_overrides(extra) if extra else params


def make_cells(instances: Sequence[tuple[str, Instance | None, str | None]], variants: Sequence[str],
               seeds: Iterable[int], stop: StopCriteria,
               overrides: dict[str, str] | None = None) -> list[Cell]:
    """``instances`` holds ``(name, instance or None, load error or None)``."""
    seeds = list(seeds)
    cells = []
    for name, inst, err in instances:
        for v in variants:
            params = None if err else variant_params(v, overrides)
            label = params.variant if params else v.upper()
            cells.extend(Cell(name, inst, label, s, params, stop, err) for s in seeds)
    return cells


def run_batch(cells: Sequence[Cell], workers: int = 1) -> list[RunRecord]:
    if workers <= 1:
        return [run_cell(c) for c in cells]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_cell, cells))


def summarize(records: Sequence[RunRecord]) -> list[SummaryRow]:
    """Mean and spread of RPD per (instance, variant), against the best
    makespan any run in the batch found on that instance."""
    ok = [r for r in records if r.error is None]
    ref: dict[str, int] = {}
    for r in ok:
        ref[r.instance] = min(ref.get(r.instance, r.makespan), r.makespan)
    groups: dict[tuple[str, str], list[RunRecord]] = {}
    for r in ok:
        groups.setdefault((r.instance, r.variant), []).append(r)
    out = []
    for (inst, variant), rs in groups.items():
        vals = [rpd(r.makespan, ref[inst]) for r in rs]
        out.append(SummaryRow(inst, variant, len(rs), min(r.makespan for r in rs),
                              round(statistics.fmean(r.makespan for r in rs), 4),
                              round(statistics.fmean(vals), 4),
                              round(statistics.stdev(vals), 4) if len(vals) > 1 else 0.0))
    return out


def records_csv(records: Sequence[RunRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER.split(","))
    for r in records:
        w.writerow(r.csv_row())
    return buf.getvalue()


def summary_csv(rows: Sequence[SummaryRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_HEADER.split(","))
    for s in rows:
        w.writerow(asdict(s).values())
    return buf.getvalue()
