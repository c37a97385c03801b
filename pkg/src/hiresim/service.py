"""HTTP service exposing the engine: session creation, weight submission,
asynchronous simulation runs, and report retrieval.

Sessions are in-memory with TTL eviction; reproducibility lives in the
report's config echo, not in storage. The service performs no numeric
work of its own: a finished session stores the engine document's exact
bytes and every later read returns those bytes unchanged.
"""

import json
import logging
import os
import secrets
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import asynccontextmanager
from dataclasses import dataclass, field

from fastapi import FastAPI, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .cohort import Cohort, cohort_from_csv_text, default_synthetic_spec, generate_synthetic_cohort
from .engine import SessionConfig, render_document, result_document, run_simulation
from .errors import HireSimError, InvalidSpec, ZeroWeightVector
from .schema import REPORT_SCHEMA
from .svm import TrainConfig
from .targets import LabelingPolicy, WeightVector

log = logging.getLogger("hiresim.service")

DEFAULT_TTL_SECONDS = 3600.0

BUILTIN_COHORT = "synthetic-demo"


@dataclass
class Session:
    session_id: str
    cohort_name: str
    cohort: Cohort
    state: str = "new"  # new -> configured -> running -> done | failed
    stage: str | None = None
    result_bytes: bytes | None = None
    error: dict | None = None
    touched: float = field(default_factory=time.monotonic)

    def touch(self):
        self.touched = time.monotonic()


class SessionStore:
    """Thread-safe in-memory session registry with lazy TTL eviction."""

    def __init__(self, ttl_seconds: float = DEFAULT_TTL_SECONDS):
        self.ttl = ttl_seconds
        self._lock = threading.Lock()
        self._sessions: dict[str, Session] = {}

    def _purge(self):
        now = time.monotonic()
        stale = [sid for sid, s in self._sessions.items()
                 if now - s.touched > self.ttl and s.state != "running"]
        for sid in stale:
            del self._sessions[sid]

    def create(self, cohort_name: str, cohort: Cohort) -> Session:
        with self._lock:
            self._purge()
            session = Session(session_id=secrets.token_urlsafe(16),
                              cohort_name=cohort_name, cohort=cohort)
            self._sessions[session.session_id] = session
            return session

    def get(self, session_id: str) -> Session | None:
        with self._lock:
            self._purge()
            session = self._sessions.get(session_id)
            if session:
                session.touch()
            return session

    def try_start(self, session_id: str) -> Session | str:
        """Atomically move a session into the running state.

        Returns the session, or "missing" / "conflict".
        """
        with self._lock:
            self._purge()
            session = self._sessions.get(session_id)
            if session is None:
                return "missing"
            if session.state == "running":
                return "conflict"
            session.state = "configured"
            session.state = "running"
            session.stage = "queued"
            session.result_bytes = None
            session.error = None
            session.touch()
            return session

    def finish(self, session: Session, result_bytes: bytes):
        with self._lock:
            session.result_bytes = result_bytes
            session.state = "done"
            session.stage = None
            session.touch()

    def fail(self, session: Session, error: dict):
        with self._lock:
            session.error = error
            session.state = "failed"
            session.stage = None
            session.touch()


def _error_response(status: int, payload: dict) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": payload})


class CreateSessionRequest(BaseModel):
    cohort: str | None = None
    cohort_csv: str | None = None


class RunRequest(BaseModel):
    weights_a: dict
    weights_b: dict
    master_seed: int = 0
    policy: dict | None = None
    train: dict | None = None


def _build_overrides(cls, overrides: dict | None, what: str):
    if not overrides:
        return cls()
    try:
        return cls(**overrides)
    except TypeError:
        raise InvalidSpec(f"unknown {what} option in {sorted(overrides)}") from None


def create_app(cohorts: dict[str, Cohort] | None = None, ui_dir: str | None = None,
               ttl_seconds: float = DEFAULT_TTL_SECONDS,
               max_workers: int | None = None) -> FastAPI:
    """Build the service with the given built-in cohorts preloaded.

    The default app carries one built-in synthetic demo cohort.
    """
    if cohorts is None:
        cohorts = {BUILTIN_COHORT: generate_synthetic_cohort(default_synthetic_spec(2000), 7)}
    store = SessionStore(ttl_seconds=ttl_seconds)
    pool = ThreadPoolExecutor(max_workers=max_workers or os.cpu_count() or 2)

    @asynccontextmanager
    async def lifespan(_: FastAPI):
        yield
        pool.shutdown(wait=False, cancel_futures=True)

    app = FastAPI(title="hiresim", lifespan=lifespan)
    app.state.store = store
    app.state.cohorts = cohorts

    @app.get("/api/cohorts")
    def list_cohorts():
        return {
            "cohorts": [
                {"name": name, "size": len(cohort), "kind": cohort.provenance.kind}
                for name, cohort in sorted(cohorts.items())
            ]
        }

    @app.get("/api/schema/report")
    def report_schema():
        return REPORT_SCHEMA

    @app.post("/api/sessions", status_code=201)
    def create_session(request: CreateSessionRequest):
        if (request.cohort is None) == (request.cohort_csv is None):
            return _error_response(422, {
                "code": "invalid_request",
                "message": "provide exactly one of 'cohort' (built-in name) or 'cohort_csv'",
            })
        try:
            if request.cohort is not None:
                if request.cohort not in cohorts:
                    return _error_response(404, {
                        "code": "unknown_cohort",
                        "message": f"no built-in cohort named {request.cohort!r}",
                        "available": sorted(cohorts),
                    })
                name, cohort = request.cohort, cohorts[request.cohort]
            else:
                cohort = cohort_from_csv_text(request.cohort_csv, source="<upload>")
                name = "<upload>"
        except HireSimError as exc:
            return _error_response(422, exc.payload())
        session = store.create(name, cohort)
        return JSONResponse(status_code=201, content={
            "session_id": session.session_id,
            "cohort": {"name": name, "size": len(cohort)},
            "state": session.state,
        })

    def _execute(session: Session, config: SessionConfig):
        def progress(stage: str):
            session.stage = stage

        try:
            result = run_simulation(config, progress=progress)
            document = result_document(result)
            store.finish(session, render_document(document).encode("utf-8"))
        except HireSimError as exc:
            log.warning("session %s failed: %s", session.session_id, exc)
            store.fail(session, exc.payload())
        except Exception as exc:  # noqa: BLE001 - surface anything to the client
            log.exception("session %s crashed", session.session_id)
            store.fail(session, {"code": "internal", "message": str(exc)})

    @app.post("/api/sessions/{session_id}/run", status_code=202)
    def submit_and_run(session_id: str, request: RunRequest):
        try:
            weights_a = WeightVector.from_mapping(request.weights_a)
            weights_b = WeightVector.from_mapping(request.weights_b)
            policy = _build_overrides(LabelingPolicy, request.policy, "policy")
            train = _build_overrides(TrainConfig, request.train, "train")
        except (ZeroWeightVector, InvalidSpec) as exc:
            return _error_response(422, exc.payload())

        started = store.try_start(session_id)
        if started == "missing":
            return _error_response(404, {"code": "unknown_session",
                                         "message": f"no session {session_id!r}"})
        if started == "conflict":
            return _error_response(409, {"code": "conflict",
                                         "message": "a run is already in progress"})
        session = started
        config = SessionConfig(cohort=session.cohort, weights_a=weights_a,
                               weights_b=weights_b, policy=policy, train=train,
                               master_seed=request.master_seed)
        pool.submit(_execute, session, config)
        return JSONResponse(status_code=202,
                            content={"session_id": session_id, "state": "running"})

    @app.get("/api/sessions/{session_id}/results")
    def get_results(session_id: str):
        session = store.get(session_id)
        if session is None:
            return _error_response(404, {"code": "unknown_session",
                                         "message": f"no session {session_id!r}"})
        if session.state == "done":
            # exact stored bytes: byte-identical across reads, identical to
            # what the CLI writes for the same config
            return Response(content=session.result_bytes, media_type="application/json")
        if session.state == "failed":
            return {"state": "failed", "error": session.error}
        return {"state": session.state, "stage": session.stage}

    if ui_dir and os.path.isdir(ui_dir):
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
