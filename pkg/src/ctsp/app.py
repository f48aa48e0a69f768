"""HTTP front end over :mod:`ctsp.service`."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import service as svc

app = FastAPI(title="ctsp", version="0.1.0")


def _call(fn, req):
    try:
        return fn(req)
    except svc.InputError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from None


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/generate", response_model=svc.GenerateResponse)
def generate(req: svc.GenerateRequest):
    return _call(svc.generate, req)


@app.post("/solve", response_model=svc.SolveResponse)
def solve(req: svc.SolveRequest):
    return _call(svc.solve, req)


@app.post("/batch", response_model=svc.BatchResponse)
def batch(req: svc.BatchRequest):
    return _call(svc.batch, req)


@app.post("/exact", response_model=svc.ExactResponse)
def exact(req: svc.ExactRequest):
    return _call(svc.exact, req)


@app.post("/best-ff", response_model=svc.BestFFResponse)
def best_ff(req: svc.BestFFRequest):
    return _call(svc.best_ff, req)


@app.post("/export-cp", response_model=svc.ExportResponse)
def export_cp(req: svc.ExportRequest):
    return _call(svc.export_cp, req)


@app.post("/validate", response_model=svc.ValidateResponse)
def validate(req: svc.ValidateRequest):
    return _call(svc.check_schedule, req)
