"""Interactive session state machine with journaled persistence."""

from __future__ import annotations

import json
import threading
import time
import uuid
from collections import OrderedDict
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .engine import Engine
from .index import Query, RankedList
from .selection import ConceptSlate


class SessionError(Exception):
    pass


class SessionNotFound(SessionError):
    pass


class InvalidRequest(SessionError):
    """Bad input: empty query or selection outside the slate."""


class IllegalTransition(SessionError):
    """Operation not allowed in the session's current step."""


class Step(str, Enum):
    QUERIED = "QUERIED"
    SLATE_SHOWN = "SLATE_SHOWN"
    FEEDBACK_RECEIVED = "FEEDBACK_RECEIVED"
    RERANKED = "RERANKED"


@dataclass
class Session:
    session_id: str
    query: Query
    step: Step
    slate: ConceptSlate
    baseline: RankedList
    selected_concepts: frozenset[str] = frozenset()
    results: RankedList = field(default_factory=RankedList)
    created_at: float = 0.0
    updated_at: float = 0.0


@dataclass(frozen=True)
class ResultRow:
    rank: int
    doc_id: str
    title: str
    snippet: str
    score: float


class SessionStore:
    """Thread-safe session registry over an immutable engine.

    Events are journaled to an append-only JSONL file; since the engine is
    deterministic, replaying the journal reconstructs every session.
    """

    def __init__(
        self,
        engine: Engine,
        journal_path: str | Path | None = None,
        max_sessions: int | None = None,
    ):
        self.engine = engine
        self.journal_path = Path(journal_path) if journal_path else None
        self.max_sessions = max_sessions
        self._sessions: OrderedDict[str, Session] = OrderedDict()
        self._locks: dict[str, threading.Lock] = {}
        self._store_lock = threading.Lock()
        if self.journal_path and self.journal_path.exists():
            self._replay()

    # -- journaling --------------------------------------------------------------

    def _journal(self, event: dict) -> None:
        if not self.journal_path:
            return
        with open(self.journal_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event) + "\n")

    def _replay(self) -> None:
        with open(self.journal_path, encoding="utf-8") as fh:
            events = [json.loads(line) for line in fh if line.strip()]
        for event in events:
            if event["type"] == "created":
                self._create(event["query"], session_id=event["session_id"], journal=False)
            elif event["type"] == "feedback":
                self.submit_feedback(
                    event["session_id"], set(event["selected"]), journal=False
                )

    # -- lifecycle -----------------------------------------------------------------

    def _create(self, query_text: str, session_id: str | None = None, journal: bool = True) -> Session:
        query = self.engine.make_query(query_text)
        if not query.term_counts:
            raise InvalidRequest("empty query")
        session_id = session_id or uuid.uuid4().hex
        baseline = self.engine.baseline(query)
        slate = self.engine.suggest(query, baseline)
        now = time.time()
        session = Session(
            session_id=session_id,
            query=query,
            step=Step.SLATE_SHOWN,
            slate=slate,
            baseline=baseline,
            created_at=now,
            updated_at=now,
        )
        with self._store_lock:
            self._sessions[session_id] = session
            self._locks[session_id] = threading.Lock()
            if self.max_sessions is not None:
                while len(self._sessions) > self.max_sessions:
                    evicted, _ = self._sessions.popitem(last=False)
                    self._locks.pop(evicted, None)
        if journal:
            self._journal({"type": "created", "session_id": session_id, "query": query_text})
        return session

    def create_session(self, query_text: str) -> Session:
        return self._create(query_text)

    def get(self, session_id: str) -> Session:
        with self._store_lock:
            try:
                return self._sessions[session_id]
            except KeyError:
                raise SessionNotFound(f"unknown session: {session_id!r}") from None

    def _lock_for(self, session_id: str) -> threading.Lock:
        with self._store_lock:
            if session_id not in self._locks:
                raise SessionNotFound(f"unknown session: {session_id!r}")
            return self._locks[session_id]

    def submit_feedback(
        self, session_id: str, selected: set[str], journal: bool = True
    ) -> Session:
        session = self.get(session_id)
        with self._lock_for(session_id):
            if session.step != Step.SLATE_SHOWN:
                raise IllegalTransition(
                    f"session is in step {session.step.value}, expected SLATE_SHOWN"
                )
            slate_ids = set(session.slate.concept_ids())
            outside = set(selected) - slate_ids
            if outside:
                raise InvalidRequest(f"selection outside slate: {sorted(outside)}")
            session.selected_concepts = frozenset(selected)
            session.step = Step.FEEDBACK_RECEIVED
            session.results = self.engine.rerank(
                session.query, session.selected_concepts, session.baseline
            )
            session.step = Step.RERANKED
            session.updated_at = time.time()
        if journal:
            self._journal(
                {"type": "feedback", "session_id": session_id, "selected": sorted(selected)}
            )
        return session

    def get_results(self, session_id: str, offset: int = 0, limit: int = 10) -> list[ResultRow]:
        """Stable pagination over re-ranked results (baseline before feedback)."""
        session = self.get(session_id)
        ranking = session.results if session.step == Step.RERANKED else session.baseline
        rows = []
        for entry in ranking.entries[offset : offset + limit]:
            doc = self.engine.index.docs[entry.doc_id]
            rows.append(
                ResultRow(
                    rank=entry.rank,
                    doc_id=entry.doc_id,
                    title=doc.title,
                    snippet=self.engine.snippet(entry.doc_id, session.query),
                    score=entry.score,
                )
            )
        return rows
