"""Request/response models and the operations behind both the HTTP API and
the command line.  Instances and schedules travel as their text formats."""

from __future__ import annotations

from pydantic import BaseModel, Field

from .brkga import StopCriteria, run
from .cp_export import emit_minizinc
from .exact import BEST_FF_MAX_N, EXACT_MAX_N, OracleLimitError, best_first_fit, solve_exact
from .harness import RunRecord, make_cells, records_csv, run_batch, run_rng_seed, summarize, summary_csv
from .instance import InstanceFormatError, batch_name, generate_instance, parse_instance, write_instance
from .params import ParamsError, params_from_text, parse_params_text, preset
from .schedule import dump_schedule, makespan, parse_schedule_dump, validate


class InputError(ValueError):
    """Bad instance, schedule or parameter input."""


class InstanceText(BaseModel):
    name: str = "instance"
    text: str | None = None
    error: str | None = None


class GenerateRequest(BaseModel):
    n: int = Field(ge=1)
    category: str = "S"
    seed: int = 0
    count: int = Field(default=1, ge=1)


class GenerateResponse(BaseModel):
    instances: list[InstanceText]


class SolveRequest(BaseModel):
    instance: InstanceText
    variant: str = "r-s-ls"
    time_limit: float | None = 10.0
    max_iterations: int | None = None
    target: int | None = None
    seed: int = 0
    params_text: str | None = None
    overrides: dict[str, str] = {}


class SolveResponse(BaseModel):
    record: dict
    makespan: int
    schedule: str


class BatchRequest(BaseModel):
    instances: list[InstanceText]
    variants: list[str] = ["r-s-ls"]
    seeds: list[int] = [0]
    time_limit: float | None = 10.0
    max_iterations: int | None = None
    overrides: dict[str, str] = {}
    workers: int = 1


class BatchResponse(BaseModel):
    records: list[dict]
    csv: str
    summary_csv: str


class ExactRequest(BaseModel):
    instance: InstanceText
    max_n: int = EXACT_MAX_N
    time_limit: float | None = None


class ExactResponse(BaseModel):
    makespan: int
    optimal: bool
    schedule: str


class BestFFRequest(BaseModel):
    instance: InstanceText
    max_n: int = BEST_FF_MAX_N


class BestFFResponse(BaseModel):
    makespan: int
    sequence: list[int]


class ExportRequest(BaseModel):
    instance: InstanceText


class ExportResponse(BaseModel):
    model: str


class ValidateRequest(BaseModel):
    instance: InstanceText
    schedule: str


class ValidateResponse(BaseModel):
    ok: bool
    makespan: int | None
    violations: list[str]


def _load(item: InstanceText):
    """``(instance, None)`` or ``(None, reason)``."""
    if item.error is not None or item.text is None:
        return None, item.error or "no instance text"
    try:
        return parse_instance(item.text, name=item.name), None
    except (InstanceFormatError, ValueError) as exc:
        return None, str(exc)


def _instance(item: InstanceText):
    inst, err = _load(item)
    if err is not None:
        raise InputError(f"{item.name}: {err}")
    return inst


def params_overrides(text: str) -> dict[str, str]:
    try:
        return parse_params_text(text)
    except ParamsError as exc:
        raise InputError(f"params: {exc}") from None


def generate(req: GenerateRequest) -> GenerateResponse:
    try:
        out = []
        for idx in range(1, req.count + 1):
            seed = req.seed + idx - 1
            name = None if req.count == 1 else batch_name(req.n, idx, req.category)
            inst = generate_instance(req.n, req.category, seed, name=name)
            out.append(InstanceText(name=inst.name, text=write_instance(inst)))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return GenerateResponse(instances=out)


def _params(variant: str, params_text: str | None, overrides: dict[str, str]):
    try:
        params = preset(variant)
        if params_text:
            params = params_from_text(params_text, base=params)
        return params.with_overrides(overrides) if overrides else params
    except (ParamsError, TypeError) as exc:
        raise InputError(str(exc)) from None


def solve(req: SolveRequest) -> SolveResponse:
    inst = _instance(req.instance)
    params = _params(req.variant, req.params_text, req.overrides)
    try:
        stop = StopCriteria(req.time_limit, req.max_iterations, req.target)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    r = run(inst, params, stop, run_rng_seed(req.seed, inst.name))
    rec = RunRecord.from_result(inst.name, params.variant, req.seed, r)
    return SolveResponse(record=rec.__dict__, makespan=r.makespan, schedule=dump_schedule(r.schedule, inst))


def batch(req: BatchRequest) -> BatchResponse:
    loaded = [(item.name, *_load(item)) for item in req.instances]
    try:
        for v in req.variants:
            preset(v)
        stop = StopCriteria(req.time_limit, req.max_iterations)
        cells = make_cells(loaded, req.variants, req.seeds, stop, req.overrides)
    except (ParamsError, ValueError) as exc:
        raise InputError(str(exc)) from None
    records = run_batch(cells, req.workers)
    return BatchResponse(records=[r.__dict__ for r in records], csv=records_csv(records),
                         summary_csv=summary_csv(summarize(records)))


def exact(req: ExactRequest) -> ExactResponse:
    inst = _instance(req.instance)
    try:
        res = solve_exact(inst, req.max_n, req.time_limit)
    except OracleLimitError as exc:
        raise InputError(str(exc)) from None
    return ExactResponse(makespan=res.makespan, optimal=res.optimal, schedule=dump_schedule(res.schedule, inst))


def best_ff(req: BestFFRequest) -> BestFFResponse:
    inst = _instance(req.instance)
    try:
        c, seq = best_first_fit(inst, req.max_n)
    except OracleLimitError as exc:
        raise InputError(str(exc)) from None
    return BestFFResponse(makespan=c, sequence=list(seq))


def export_cp(req: ExportRequest) -> ExportResponse:
    return ExportResponse(model=emit_minizinc(_instance(req.instance)))


def check_schedule(req: ValidateRequest) -> ValidateResponse:
    inst = _instance(req.instance)
    try:
        S = parse_schedule_dump(req.schedule, inst)
    except ValueError as exc:
        raise InputError(f"schedule: {exc}") from None
    problems = validate(S, inst, complete=True)
    return ValidateResponse(ok=not problems, makespan=makespan(S, inst) if not problems else None,
                            violations=[str(v) for v in problems])
