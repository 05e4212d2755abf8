"""Session-oriented HTTP API for driving the engine from a UI.

One session per exploring user: create it with a mark space (inline doc or
generated dataset), POST each click, get the refreshed prediction back in
the same response. Sessions live in process memory and expire after an
idle timeout. All errors use one payload shape::

    {"error": {"code": "...", "message": "..."}}

Codes: BAD_REQUEST, BAD_SPACE, BAD_PARAMS, UNKNOWN_MARK, SESSION_NOT_FOUND.
"""

from __future__ import annotations

import json
import secrets
import threading
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .engine import (FilterParams, ParticleSet, PredictionSet,
                     init_particles, predict, step)
from .marks import ClickLogError, MarkSpace, MarkSpaceError, load_markspace
from .model import ModelParams
from .simulate import generate_dataset


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


class DatasetBody(BaseModel):
    n_marks: int = 1951
    color_count: int = 8
    seed: int = 0


class ParamsBody(BaseModel):
    particles: int = 1000
    alpha: int = 100
    sigma_x: float = 0.1
    sigma_y: float = 0.1
    sigma_pi: float = 0.45
    rho: float = 0.96
    warmup: int = 3
    seed: int = 0
    resampling: str = "multinomial"


class CreateSessionBody(BaseModel):
    space: Optional[dict] = None
    spec: Optional[dict] = None  # alias accepted for the inline space doc
    dataset: Optional[DatasetBody] = None
    params: ParamsBody = ParamsBody()


class ClickBody(BaseModel):
    mark_id: int


@dataclass
class Session:
    id: str
    space: MarkSpace
    params: FilterParams
    ps: ParticleSet
    last_prediction: Optional[PredictionSet] = None
    history: list = field(default_factory=list)
    created: float = field(default_factory=time.monotonic)
    last_active: float = field(default_factory=time.monotonic)
    lock: threading.Lock = field(default_factory=threading.Lock)


def _build_params(body: ParamsBody) -> FilterParams:
    try:
        model = ModelParams(sigma_x=body.sigma_x, sigma_y=body.sigma_y,
                            sigma_pi=body.sigma_pi, rho=body.rho)
        return FilterParams(n_particles=body.particles, alpha=body.alpha,
                            model=model, seed=body.seed, warmup=body.warmup,
                            resampling=body.resampling)
    except ValueError as exc:
        raise ApiError(422, "BAD_PARAMS", str(exc))


def _build_space(body: CreateSessionBody) -> MarkSpace:
    doc = body.space if body.space is not None else body.spec
    if doc is not None:
        try:
            # bytes input means raw document text, not a file path
            return load_markspace(json.dumps(doc).encode("utf-8"))
        except MarkSpaceError as exc:
            raise ApiError(422, "BAD_SPACE", str(exc))
    ds = body.dataset if body.dataset is not None else DatasetBody()
    try:
        return generate_dataset(n_marks=ds.n_marks, color_count=ds.color_count,
                                seed=ds.seed)
    except ValueError as exc:
        raise ApiError(422, "BAD_SPACE", str(exc))


def _prediction_payload(sess: Session) -> dict:
    if sess.ps.t < sess.params.warmup or sess.last_prediction is None:
        return {"t": sess.ps.t, "status": "warmup", "prediction": []}
    pred = sess.last_prediction
    return {"t": sess.ps.t, "status": "ok",
            "prediction": [{"mark_id": int(mid), "score": float(s)}
                           for mid, s in pred.entries]}


def _space_payload(space: MarkSpace) -> dict:
    return {"width": 1.0, "height": 1.0, "color_count": space.color_count,
            "marks": [{"id": int(m.id), "x": m.x, "y": m.y, "color": m.color}
                      for m in space.marks]}


def create_app(idle_timeout: float = 3600.0, particle_cap: int = 500) -> FastAPI:
    """Build the service app; one instance owns one in-memory session table."""
    app = FastAPI(title="nextmark", docs_url=None, redoc_url=None)
    # the browser demo is served from a separate static origin; sessions are
    # ephemeral and unauthenticated, so a permissive policy is fine here
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict[str, Session] = {}
    table_lock = threading.Lock()

    def _sweep() -> None:
        now = time.monotonic()
        stale = [sid for sid, s in sessions.items()
                 if now - s.last_active > idle_timeout]
        for sid in stale:
            sessions.pop(sid, None)

    def _get(sid: str) -> Session:
        with table_lock:
            _sweep()
            sess = sessions.get(sid)
        if sess is None:
            raise ApiError(404, "SESSION_NOT_FOUND", f"no session {sid!r}")
        sess.last_active = time.monotonic()
        return sess

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status,
                            content={"error": {"code": exc.code,
                                               "message": exc.message}})

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=422,
                            content={"error": {"code": "BAD_REQUEST",
                                               "message": str(exc.errors())}})

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody) -> dict:
        space = _build_space(body)
        params = _build_params(body.params)
        sess = Session(id=secrets.token_hex(8), space=space, params=params,
                       ps=init_particles(space, params))
        with table_lock:
            _sweep()
            sessions[sess.id] = sess
        return {"id": sess.id, "t": 0, "n_marks": len(space),
                "color_count": space.color_count,
                "warmup": params.warmup, "alpha": params.alpha}

    @app.get("/sessions/{sid}/space")
    def get_space(sid: str) -> dict:
        return _space_payload(_get(sid).space)

    @app.post("/sessions/{sid}/clicks")
    def post_click(sid: str, body: ClickBody) -> dict:
        sess = _get(sid)
        with sess.lock:
            try:
                click = sess.space.click(body.mark_id, sess.ps.t + 1)
            except ClickLogError as exc:
                raise ApiError(422, "UNKNOWN_MARK", str(exc))
            prev = sess.last_prediction
            prev_hit = (body.mark_id in prev) if prev is not None else None
            sess.ps = step(sess.ps, click, sess.space, sess.params)
            if sess.ps.t >= sess.params.warmup:
                sess.last_prediction = predict(sess.ps, sess.space, sess.params)
            sess.history.append({"t": click.t, "mark_id": body.mark_id,
                                 "prev_hit": prev_hit})
            payload = _prediction_payload(sess)
        payload["prev_hit"] = prev_hit
        return payload

    @app.get("/sessions/{sid}/prediction")
    def get_prediction(sid: str) -> dict:
        sess = _get(sid)
        with sess.lock:
            return _prediction_payload(sess)

    @app.get("/sessions/{sid}/particles")
    def get_particles(sid: str) -> dict:
        sess = _get(sid)
        with sess.lock:
            xs, ys = sess.ps.xs, sess.ps.ys
            colors, pis = sess.ps.colors, sess.ps.pis
            t = sess.ps.t
        m = xs.shape[0]
        if m > particle_cap:
            keep = np.linspace(0, m - 1, particle_cap).astype(np.intp)
            xs, ys, colors, pis = xs[keep], ys[keep], colors[keep], pis[keep]
        hist, _ = np.histogram(pis, bins=10, range=(0.0, 1.0))
        frac = hist / max(pis.shape[0], 1)
        return {"t": t, "n_particles": m,
                "points": [{"x": float(x), "y": float(y), "k": int(k)}
                           for x, y, k in zip(xs, ys, colors)],
                "pi_hist": [float(v) for v in frac]}

    @app.delete("/sessions/{sid}", status_code=204)
    def delete_session(sid: str) -> None:
        with table_lock:
            if sessions.pop(sid, None) is None:
                raise ApiError(404, "SESSION_NOT_FOUND", f"no session {sid!r}")

    return app


app = create_app()
