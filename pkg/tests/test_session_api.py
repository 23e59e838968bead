import pytest
from fastapi.testclient import TestClient

from conceptir.api import create_app
from conceptir.session import (
    IllegalTransition,
    InvalidRequest,
    SessionNotFound,
    SessionStore,
    Step,
)


@pytest.fixture()
def store(planted_engine):
    return SessionStore(planted_engine)


@pytest.fixture()
def client(store):
    return TestClient(create_app(store))


def test_create_session_shows_slate(store):
    session = store.create_session("query0a query0b")
    assert session.step is Step.SLATE_SHOWN
    assert 0 < len(session.slate) <= store.engine.config.selection.slate_size
    assert len(session.results) == 0


def test_empty_query_rejected(store):
    with pytest.raises(InvalidRequest, match="empty query"):
        store.create_session("the and of")


def test_same_query_two_sessions_identical_slates(store):
    a = store.create_session("query1a query1b")
    b = store.create_session("query1a query1b")
    assert a.session_id != b.session_id
    assert a.slate.entries == b.slate.entries


def test_feedback_flow(store):
    session = store.create_session("query2a query2b")
    assert "c02rel" in session.slate.concept_ids()
    out = store.submit_feedback(session.session_id, {"c02rel"})
    assert out.step is Step.RERANKED
    assert len(out.results) > 0


def test_empty_selection_keeps_baseline_order(store):
    session = store.create_session("query3a query3b")
    store.submit_feedback(session.session_id, set())
    assert session.results.doc_ids() == session.baseline.doc_ids()


def test_selection_outside_slate_rejected(store):
    session = store.create_session("query4a query4b")
    with pytest.raises(InvalidRequest, match="outside slate"):
        store.submit_feedback(session.session_id, {"not-a-slate-concept"})
    assert session.step is Step.SLATE_SHOWN


def test_double_feedback_conflict(store):
    session = store.create_session("query5a query5b")
    store.submit_feedback(session.session_id, set())
    with pytest.raises(IllegalTransition):
        store.submit_feedback(session.session_id, set())


def test_unknown_session(store):
    with pytest.raises(SessionNotFound):
        store.get("missing")
    with pytest.raises(SessionNotFound):
        store.submit_feedback("missing", set())


def test_results_pagination(store):
    session = store.create_session("query6a query6b")
    store.submit_feedback(session.session_id, {"c06rel"})
    page = store.get_results(session.session_id, offset=0, limit=10)
    assert [r.rank for r in page] == list(range(1, 11))
    assert store.get_results(session.session_id, offset=10 ** 6, limit=10) == []
    again = store.get_results(session.session_id, offset=0, limit=10)
    assert page == again


def test_results_before_feedback_serves_baseline(store):
    session = store.create_session("query7a query7b")
    page = store.get_results(session.session_id, 0, 5)
    assert [r.doc_id for r in page] == session.baseline.doc_ids()[:5]


def test_sessions_isolated(store):
    a = store.create_session("query8a query8b")
    b = store.create_session("query9a query9b")
    store.submit_feedback(a.session_id, set())
    assert store.get(b.session_id).step is Step.SLATE_SHOWN


def test_journal_replay(planted_engine, tmp_path):
    journal = tmp_path / "sessions.jsonl"
    store = SessionStore(planted_engine, journal_path=journal)
    session = store.create_session("query0a query0b")
    store.submit_feedback(session.session_id, {"c00rel"})

    revived = SessionStore(planted_engine, journal_path=journal)
    replayed = revived.get(session.session_id)
    assert replayed.step is Step.RERANKED
    assert replayed.results.doc_ids() == session.results.doc_ids()
    assert replayed.slate.entries == session.slate.entries


def test_max_sessions_lru_eviction(planted_engine):
    store = SessionStore(planted_engine, max_sessions=2)
    a = store.create_session("query0a query0b")
    b = store.create_session("query1a query1b")
    c = store.create_session("query2a query2b")
    with pytest.raises(SessionNotFound):
        store.get(a.session_id)
    assert store.get(b.session_id) and store.get(c.session_id)


def test_snippet_contains_query_term(store):
    session = store.create_session("query0a query0b")
    rows = store.get_results(session.session_id, 0, 3)
    for row in rows:
        assert len(row.snippet) <= 200
        assert "query0" in row.snippet


# -- HTTP layer -------------------------------------------------------------


def test_api_full_flow(client):
    resp = client.post("/api/sessions", json={"query": "query0a query0b"})
    assert resp.status_code == 200
    body = resp.json()
    assert body["step"] == "SLATE_SHOWN"
    sid = body["session_id"]
    slate_ids = [item["concept_id"] for item in body["slate"]]
    assert "c00rel" in slate_ids

    resp = client.post(f"/api/sessions/{sid}/feedback", json={"selected": ["c00rel"]})
    assert resp.status_code == 200
    assert resp.json()["step"] == "RERANKED"

    resp = client.get(f"/api/sessions/{sid}/results", params={"offset": 0, "limit": 10})
    assert resp.status_code == 200
    page = resp.json()
    assert page["total"] > 0
    assert [r["rank"] for r in page["results"]] == list(range(1, 11))

    resp = client.get(f"/api/sessions/{sid}")
    assert resp.status_code == 200
    assert resp.json()["selected_concepts"] == ["c00rel"]


def test_api_error_shapes(client):
    resp = client.get("/api/sessions/missing")
    assert resp.status_code == 404
    assert resp.json() == {"code": "not_found", "message": resp.json()["message"]}

    resp = client.post("/api/sessions", json={"query": "the of and"})
    assert resp.status_code == 422
    assert resp.json()["code"] == "invalid_request"

    created = client.post("/api/sessions", json={"query": "query1a query1b"}).json()
    sid = created["session_id"]
    resp = client.post(f"/api/sessions/{sid}/feedback", json={"selected": ["bogus"]})
    assert resp.status_code == 422

    client.post(f"/api/sessions/{sid}/feedback", json={"selected": []})
    resp = client.post(f"/api/sessions/{sid}/feedback", json={"selected": []})
    assert resp.status_code == 409
    assert resp.json()["code"] == "conflict"


def test_api_health(client):
    body = client.get("/api/health").json()
    assert body["status"] == "ok"
    assert body["num_docs"] == 200
