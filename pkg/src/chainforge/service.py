"""Local HTTP facade exposing the toolkit to the designer UI.

All endpoints are stateless wrappers around the core modules; the only
synchronized structure is the job table for disorder runs above the
synchronous sample threshold, which execute in a background thread and
stream progress over server-sent events.

Error responses carry {"code", "message", "detail"} with code drawn from
{invalid_spectrum, solver_overflow, eigensolver_failure, bad_request}.
"""

from __future__ import annotations

import asyncio
import json
import math
import threading
import uuid
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, StreamingResponse
from pydantic import BaseModel

from scipy.special import betaln

from .disorder import BetaFit, DisorderConfig, default_workers, run_experiment
from .dynamics import eigendecompose, overlap_trace
from .errors import EigensolverError, InvalidSpectrumError, SolverOverflowError
from .solver import ChainCouplings, solve
from .spectra import (
    Spectrum,
    boundary_metric,
    generate_cosine,
    generate_inverted_quadratic,
    generate_linear,
    shift_spectrum,
    verify_pst,
)

__all__ = ["create_app", "SYNC_SAMPLE_LIMIT"]

# above this sample count disorder runs go async with a job id + SSE progress
SYNC_SAMPLE_LIMIT = 1000

LOCALHOST_ORIGINS = r"https?://(localhost|127\.0\.0\.1)(:\d+)?"


class SpectrumRequest(BaseModel):
    family: str | None = None
    n: int | None = None
    a: int | None = None
    values: list[float] | None = None
    params: dict | None = None
    shift: float | None = None


class SolveRequest(BaseModel):
    values: list[float]
    family: str = "custom"
    params: dict | None = None
    tau: float | None = None
    central_count: int = 0


class CouplingsBody(BaseModel):
    a: list[float]
    b: list[float]
    persymmetric: bool | None = None


class EvolveRequest(BaseModel):
    couplings: CouplingsBody
    t_max: float | None = None
    t_min: float = 0.0
    points: int = 1000
    t_grid: list[float] | None = None


class DisorderBody(BaseModel):
    r: float
    samples: int
    seed: int = 0
    tau: float


class DisorderRequest(BaseModel):
    couplings: CouplingsBody
    config: DisorderBody


@dataclass
class Job:
    id: str
    total: int
    completed: int = 0
    status: str = "running"  # running | done | failed
    report: dict | None = None
    error: dict | None = None

    def snapshot(self) -> dict:
        d = {"id": self.id, "status": self.status, "completed": self.completed, "total": self.total}
        if self.report is not None:
            d["report"] = self.report
        if self.error is not None:
            d["error"] = self.error
        return d


@dataclass
class JobRegistry:
    _jobs: dict = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock)

    def create(self, total: int) -> str:
        job_id = uuid.uuid4().hex
        with self._lock:
            self._jobs[job_id] = Job(id=job_id, total=total)
        return job_id

    def progress(self, job_id: str, completed: int) -> None:
        with self._lock:
            self._jobs[job_id].completed = completed

    def finish(self, job_id: str, report: dict) -> None:
        with self._lock:
            job = self._jobs[job_id]
            job.completed = job.total
            job.status = "done"
            job.report = report

    def fail(self, job_id: str, error: dict) -> None:
        with self._lock:
            job = self._jobs[job_id]
            job.status = "failed"
            job.error = error

    def get(self, job_id: str) -> dict | None:
        with self._lock:
            job = self._jobs.get(job_id)
            return job.snapshot() if job else None


def _error_payload(code: str, message: str, detail=None) -> dict:
    return {"code": code, "message": message, "detail": detail}


def _build_spectrum(req: SpectrumRequest) -> Spectrum:
    if req.values is not None:
        s = Spectrum.from_dict({"values": req.values, "family": req.family or "custom", "params": req.params})
    elif req.family == "linear":
        if req.n is None or req.a is None:
            raise ValueError("linear family needs n and a")
        s = generate_linear(req.n, req.a)
    elif req.family == "inverted_quadratic":
        if req.n is None:
            raise ValueError("inverted_quadratic family needs n")
        s = generate_inverted_quadratic(req.n)
    elif req.family == "cosine":
        if req.n is None:
            raise ValueError("cosine family needs n")
        s = generate_cosine(req.n)
    else:
        raise ValueError("need either values or a known family")
    if req.shift is not None:
        s = shift_spectrum(s, req.shift)
    return s


def _presets() -> list[dict]:
    linear = generate_linear(31, 7)
    quad = generate_inverted_quadratic(31)
    entries = [
        ("linear", "Linear spectrum (N=31, A=7)", linear, math.pi / 7, 0),
        ("linear_shifted", "Linear + boundary states (C=6)", shift_spectrum(linear, 6.0), math.pi, 2),
        ("inverted_quadratic", "Inverted quadratic (N=31)", quad, math.pi, 0),
        (
            "inverted_quadratic_shifted",
            "Inverted quadratic + boundary states (C=28)",
            shift_spectrum(quad, 28.0),
            math.pi,
            2,
        ),
    ]
    out = []
    for name, label, s, tau, central in entries:
        out.append(
            {
                "name": name,
                "label": label,
                "spectrum": s.to_dict(),
                "couplings": solve(s).to_dict(),
                "tau": tau,
                "central_count": central,
            }
        )
    return out


def create_app(static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="chainforge", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origin_regex=LOCALHOST_ORIGINS,
        allow_methods=["*"],
        allow_headers=["*"],
    )
    jobs = JobRegistry()
    presets_cache: list[dict] = []

    @app.exception_handler(InvalidSpectrumError)
    async def _invalid_spectrum(request: Request, exc: InvalidSpectrumError):
        return JSONResponse(status_code=422, content=_error_payload("invalid_spectrum", str(exc)))

    @app.exception_handler(SolverOverflowError)
    async def _solver_overflow(request: Request, exc: SolverOverflowError):
        return JSONResponse(
            status_code=422,
            content=_error_payload("solver_overflow", str(exc), {"index": exc.index}),
        )

    @app.exception_handler(EigensolverError)
    async def _eigensolver_failure(request: Request, exc: EigensolverError):
        return JSONResponse(
            status_code=422,
            content=_error_payload("eigensolver_failure", str(exc), {"index": exc.index}),
        )

    @app.exception_handler(ValueError)
    async def _bad_value(request: Request, exc: ValueError):
        return JSONResponse(status_code=422, content=_error_payload("bad_request", str(exc)))

    @app.exception_handler(RequestValidationError)
    async def _bad_body(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content=_error_payload("bad_request", "request body failed validation", exc.errors()),
        )

    @app.post("/api/spectrum")
    async def api_spectrum(req: SpectrumRequest):
        return _build_spectrum(req).to_dict()

    @app.post("/api/solve")
    async def api_solve(req: SolveRequest):
        s = Spectrum.from_dict({"values": req.values, "family": req.family, "params": req.params})
        couplings = solve(s)
        tau = req.tau if req.tau is not None else math.pi
        report = verify_pst(s, tau)
        return {
            "couplings": couplings.to_dict(),
            "pst": report.to_dict(),
            "boundary_metric": boundary_metric(s, req.central_count),
        }

    @app.post("/api/evolve")
    async def api_evolve(req: EvolveRequest):
        c = ChainCouplings.from_dict(req.couplings.model_dump())
        es = eigendecompose(c)
        if req.t_grid is not None:
            grid = np.asarray(req.t_grid, dtype=float)
        elif req.t_max is not None:
            if req.points < 1:
                raise ValueError("points must be positive")
            grid = np.linspace(req.t_min, req.t_max, req.points)
        else:
            raise ValueError("need t_grid or t_max")
        trace = overlap_trace(es, grid)
        return {"t": grid.tolist(), "f": trace.tolist()}

    @app.post("/api/disorder")
    async def api_disorder(req: DisorderRequest):
        c = ChainCouplings.from_dict(req.couplings.model_dump())
        cfg = DisorderConfig(
            r=req.config.r, samples=req.config.samples, seed=req.config.seed, tau=req.config.tau
        )
        if cfg.samples <= SYNC_SAMPLE_LIMIT:
            report = run_experiment(c, cfg, workers=default_workers())
            return {"status": "done", "config": cfg.to_dict(), **report.to_dict()}

        job_id = jobs.create(cfg.samples)

        def runner():
            try:
                report = run_experiment(
                    c,
                    cfg,
                    workers=default_workers(),
                    progress=lambda done, total: jobs.progress(job_id, done),
                )
                jobs.finish(job_id, {"config": cfg.to_dict(), **report.to_dict(include_overlaps=False)})
            except (InvalidSpectrumError, SolverOverflowError, EigensolverError, ValueError) as exc:
                code = {
                    InvalidSpectrumError: "invalid_spectrum",
                    SolverOverflowError: "solver_overflow",
                    EigensolverError: "eigensolver_failure",
                }.get(type(exc), "bad_request")
                jobs.fail(job_id, _error_payload(code, str(exc)))

        threading.Thread(target=runner, daemon=True).start()
        return JSONResponse(
            status_code=202,
            content={
                "status": "running",
                "job_id": job_id,
                "total": cfg.samples,
                "status_url": f"/api/jobs/{job_id}",
                "events_url": f"/api/jobs/{job_id}/events",
            },
        )

    @app.get("/api/jobs/{job_id}")
    async def api_job(job_id: str):
        snap = jobs.get(job_id)
        if snap is None:
            return JSONResponse(status_code=404, content=_error_payload("bad_request", "unknown job"))
        return snap

    @app.get("/api/jobs/{job_id}/events")
    async def api_job_events(job_id: str):
        if jobs.get(job_id) is None:
            return JSONResponse(status_code=404, content=_error_payload("bad_request", "unknown job"))

        async def stream():
            last = -1
            while True:
                snap = jobs.get(job_id)
                if snap["completed"] != last and snap["status"] == "running":
                    last = snap["completed"]
                    payload = {"completed": snap["completed"], "total": snap["total"]}
                    yield f"event: progress\ndata: {json.dumps(payload)}\n\n"
                if snap["status"] != "running":
                    yield f"event: {snap['status']}\ndata: {json.dumps(snap)}\n\n"
                    return
                await asyncio.sleep(0.05)

        return StreamingResponse(stream(), media_type="text/event-stream")

    @app.get("/api/presets")
    async def api_presets():
        if not presets_cache:
            presets_cache.extend(_presets())
        return presets_cache

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
