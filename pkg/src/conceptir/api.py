"""HTTP/JSON API over the session store, plus static hosting for the web UI."""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .session import (
    IllegalTransition,
    InvalidRequest,
    Session,
    SessionNotFound,
    SessionStore,
)


class SlateItemOut(BaseModel):
    concept_id: str
    title: str
    url: str | None = None
    score: float


class SessionOut(BaseModel):
    session_id: str
    query: str
    step: str
    slate: list[SlateItemOut]
    selected_concepts: list[str]
    num_baseline: int
    num_results: int


class CreateSessionIn(BaseModel):
    query: str


class FeedbackIn(BaseModel):
    selected: list[str] = Field(default_factory=list)


class ResultRowOut(BaseModel):
    rank: int
    doc_id: str
    title: str
    snippet: str
    score: float


class ResultsPageOut(BaseModel):
    session_id: str
    offset: int
    limit: int
    total: int
    results: list[ResultRowOut]


def _session_out(session: Session) -> SessionOut:
    return SessionOut(
        session_id=session.session_id,
        query=session.query.raw_text,
        step=session.step.value,
        slate=[
            SlateItemOut(concept_id=e.concept_id, title=e.title, url=e.url, score=e.score)
            for e in session.slate.entries
        ],
        selected_concepts=sorted(session.selected_concepts),
        num_baseline=len(session.baseline),
        num_results=len(session.results),
    )


def create_app(store: SessionStore, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="conceptir", version="0.1.0")

    def error(status: int, code: str, message: str) -> JSONResponse:
        return JSONResponse(status_code=status, content={"code": code, "message": message})

    @app.exception_handler(SessionNotFound)
    async def _not_found(_request: Request, exc: SessionNotFound):
        return error(404, "not_found", str(exc))

    @app.exception_handler(InvalidRequest)
    async def _invalid(_request: Request, exc: InvalidRequest):
        return error(422, "invalid_request", str(exc))

    @app.exception_handler(IllegalTransition)
    async def _conflict(_request: Request, exc: IllegalTransition):
        return error(409, "conflict", str(exc))

    @app.get("/api/health")
    def health():
        return {
            "status": "ok",
            "num_docs": store.engine.index.num_docs,
            "num_concepts": len(store.engine.kb),
        }

    @app.post("/api/sessions", response_model=SessionOut)
    def create_session(body: CreateSessionIn):
        return _session_out(store.create_session(body.query))

    @app.get("/api/sessions/{session_id}", response_model=SessionOut)
    def get_session(session_id: str):
        return _session_out(store.get(session_id))

    @app.post("/api/sessions/{session_id}/feedback", response_model=SessionOut)
    def submit_feedback(session_id: str, body: FeedbackIn):
        return _session_out(store.submit_feedback(session_id, set(body.selected)))

    @app.get("/api/sessions/{session_id}/results", response_model=ResultsPageOut)
    def get_results(session_id: str, offset: int = 0, limit: int = 10):
        session = store.get(session_id)
        ranking = session.results if session.step.value == "RERANKED" else session.baseline
        rows = store.get_results(session_id, offset, limit)
        return ResultsPageOut(
            session_id=session_id,
            offset=offset,
            limit=limit,
            total=len(ranking),
            results=[ResultRowOut(**row.__dict__) for row in rows],
        )

    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
