"""Command-line interface: batch engine commands plus a thin HTTP client."""

from __future__ import annotations

import json
from pathlib import Path

import click
import httpx

from .annotate import DictionaryAnnotator
from .engine import Engine, EngineConfig
from .evaluation import expand_grid, load_qrels, paired_ttest, tune_cv
from .index import CorpusIndex
from .kb import KnowledgeBase
from .rerank import RerankParams, export_run
from .selection import ConceptSelectionParams


def load_topics(path: str | Path) -> dict[str, str]:
    """Topics file: line-delimited JSON {query_id, text}."""
    topics = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rec = json.loads(line)
                topics[str(rec["query_id"])] = rec["text"]
    return topics


def engine_options(fn):
    fn = click.option("--corpus", required=True, type=click.Path(exists=True))(fn)
    fn = click.option("--kb", required=True, type=click.Path(exists=True))(fn)
    fn = click.option("--annotations", type=click.Path(exists=True), default=None)(fn)
    fn = click.option("--stopwords", type=click.Path(exists=True), default=None)(fn)
    fn = click.option("--stem", is_flag=True, default=False)(fn)
    return fn


def build_engine(corpus, kb, annotations, stopwords, stem, **config_kwargs) -> Engine:
    config = EngineConfig(stopwords_path=stopwords, stem=stem, **config_kwargs)
    return Engine.build(corpus, kb, annotations, config)


@click.group()
def main():
    """Interactive concept-feedback retrieval engine."""


@main.command()
@click.option("--corpus", required=True, type=click.Path(exists=True))
@click.option("--stopwords", type=click.Path(exists=True), default=None)
@click.option("--stem", is_flag=True, default=False)
def ingest(corpus, stopwords, stem):
    """Validate a corpus file and print its statistics."""
    config = EngineConfig(stopwords_path=stopwords, stem=stem)
    index = CorpusIndex(config.make_tokenizer())
    stats = index.ingest_corpus(corpus)
    click.echo(f"docs: {stats.num_docs}")
    click.echo(f"avg_doc_length: {stats.avg_doc_length:.2f}")
    click.echo(f"vocabulary: {len(index.terms)}")


@main.command("load-kb")
@click.option("--kb", required=True, type=click.Path(exists=True))
@click.option("--stopwords", type=click.Path(exists=True), default=None)
@click.option("--stem", is_flag=True, default=False)
def load_kb_cmd(kb, stopwords, stem):
    """Validate a knowledge-base file and print its statistics."""
    config = EngineConfig(stopwords_path=stopwords, stem=stem)
    store = KnowledgeBase(config.make_tokenizer())
    stats = store.load_kb(kb)
    click.echo(f"concepts: {stats.num_concepts}")
    click.echo(f"avg_title_length: {stats.avg_title_length:.2f}")
    click.echo(f"avg_article_length: {stats.avg_article_length:.2f}")
    click.echo(f"avg_anchor_length: {stats.avg_anchor_length:.2f}")


@main.command()
@engine_options
@click.option("--output", required=True, type=click.Path())
def annotate(corpus, kb, annotations, stopwords, stem, output):
    """Annotate the corpus with the dictionary matcher and export JSONL."""
    engine = build_engine(corpus, kb, annotations, stopwords, stem)
    if annotations is None:
        store = engine.annotations
    else:  # re-annotate from scratch even when a file was provided
        store = DictionaryAnnotator(engine.kb).annotate_corpus(engine.index)
    store.export(output)
    click.echo(f"wrote {len(store.all_annotations())} annotations to {output}")


@main.command()
@engine_options
@click.argument("query_text")
@click.option("-k", "top_k", default=10, show_default=True)
def search(corpus, kb, annotations, stopwords, stem, query_text, top_k):
    """Rank documents for QUERY_TEXT with the initial-query BM25."""
    engine = build_engine(corpus, kb, annotations, stopwords, stem)
    query = engine.make_query(query_text)
    for entry in engine.baseline(query, top_k).entries:
        title = engine.index.docs[entry.doc_id].title
        click.echo(f"{entry.rank:4d}  {entry.score:10.4f}  {entry.doc_id}  {title}")


@main.command()
@engine_options
@click.argument("query_text")
@click.option("--slate-size", default=20, show_default=True)
def suggest(corpus, kb, annotations, stopwords, stem, query_text, slate_size):
    """Show the concept slate for QUERY_TEXT."""
    engine = build_engine(corpus, kb, annotations, stopwords, stem)
    engine.config.selection.slate_size = slate_size
    query = engine.make_query(query_text)
    slate = engine.suggest(query)
    for i, entry in enumerate(slate.entries, 1):
        click.echo(f"{i:4d}  {entry.score:10.4f}  {entry.concept_id}  {entry.title}")


@main.command()
@engine_options
@click.argument("query_text")
@click.option("--concepts", required=True, help="Comma-separated selected concept ids.")
@click.option("-k", "top_k", default=10, show_default=True)
@click.option("--run-output", type=click.Path(), default=None)
def rerank(corpus, kb, annotations, stopwords, stem, query_text, concepts, top_k, run_output):
    """Re-rank documents for QUERY_TEXT given selected concepts."""
    engine = build_engine(corpus, kb, annotations, stopwords, stem)
    query = engine.make_query(query_text)
    selected = {c.strip() for c in concepts.split(",") if c.strip()}
    unknown = {c for c in selected if c not in engine.kb}
    if unknown:
        raise click.ClickException(f"unknown concept ids: {sorted(unknown)}")
    ranking = engine.rerank(query, selected)
    for entry in ranking.entries[:top_k]:
        title = engine.index.docs[entry.doc_id].title
        click.echo(f"{entry.rank:4d}  {entry.score:10.4f}  {entry.doc_id}  {title}")
    if run_output:
        export_run(run_output, query.query_id, ranking)


@main.command("eval")
@engine_options
@click.option("--topics", required=True, type=click.Path(exists=True))
@click.option("--qrels", required=True, type=click.Path(exists=True))
@click.option("--concept-qrels", type=click.Path(exists=True), default=None)
@click.option("--simulate-user", is_flag=True, default=False)
@click.option("--noise", default=0.0, show_default=True)
@click.option("--seeds", default=1, show_default=True, help="Simulated users to average over.")
@click.option("--report-output", type=click.Path(), default=None)
def eval_cmd(
    corpus, kb, annotations, stopwords, stem,
    topics, qrels, concept_qrels, simulate_user, noise, seeds, report_output,
):
    """Compare baseline vs. feedback retrieval over a topic set."""
    engine = build_engine(corpus, kb, annotations, stopwords, stem)
    topic_map = load_topics(topics)
    doc_qrels = load_qrels(qrels)
    cqrels = load_qrels(concept_qrels) if concept_qrels else None
    if simulate_user and cqrels is None:
        raise click.ClickException("--simulate-user requires --concept-qrels")

    runs = []
    for seed in range(seeds):
        base, fed = engine.evaluate_feedback_run(
            topic_map, doc_qrels, cqrels, simulate=simulate_user, noise=noise, seed=seed
        )
        runs.append((base, fed))
    base = runs[0][0]
    fed_map = sum(f.map for _, f in runs) / len(runs)
    fed_p10 = sum(f.mean_p10 for _, f in runs) / len(runs)

    click.echo(f"{'run':<12}{'MAP':>10}{'P@10':>10}")
    click.echo(f"{'baseline':<12}{base.map:>10.4f}{base.mean_p10:>10.4f}")
    click.echo(f"{'feedback':<12}{fed_map:>10.4f}{fed_p10:>10.4f}")
    if base.skipped_queries:
        click.echo(f"skipped (no judged-relevant docs): {', '.join(base.skipped_queries)}")
    if seeds == 1 and len(base.per_query) >= 2:
        fed = runs[0][1]
        stat, pvalue = paired_ttest(
            [q.average_precision for q in fed.per_query],
            [q.average_precision for q in base.per_query],
        )
        click.echo(f"paired t-test on AP: t={stat:.4f}, p={pvalue:.4f}")

    if report_output:
        with open(report_output, "w", encoding="utf-8") as fh:
            for base_q, fed_q in zip(runs[0][0].per_query, runs[0][1].per_query):
                fh.write(
                    json.dumps(
                        {
                            "query_id": base_q.query_id,
                            "baseline_ap": base_q.average_precision,
                            "baseline_p10": base_q.precision_at_10,
                            "feedback_ap": fed_q.average_precision,
                            "feedback_p10": fed_q.precision_at_10,
                        }
                    )
                    + "\n"
                )


@main.command()
@engine_options
@click.option("--topics", required=True, type=click.Path(exists=True))
@click.option("--qrels", type=click.Path(exists=True), default=None)
@click.option("--concept-qrels", type=click.Path(exists=True), default=None)
@click.option("--grid", required=True, help="JSON object of parameter -> list of values.")
@click.option("--params", "param_kind", type=click.Choice(["betas", "alphas"]), default="betas")
@click.option("--target", type=click.Choice(["map", "ndcg"]), default="map", show_default=True)
@click.option("--folds", default=2, show_default=True)
@click.option("--seed", default=0, show_default=True)
def tune(
    corpus, kb, annotations, stopwords, stem,
    topics, qrels, concept_qrels, grid, param_kind, target, folds, seed,
):
    """Cross-validated grid search over fusion weights."""
    engine = build_engine(corpus, kb, annotations, stopwords, stem)
    topic_map = load_topics(topics)
    grid_points = expand_grid(json.loads(grid))
    cqrels = load_qrels(concept_qrels) if concept_qrels else None

    if param_kind == "betas":
        if qrels is None or cqrels is None:
            raise click.ClickException("tuning betas requires --qrels and --concept-qrels")
        doc_qrels = load_qrels(qrels)

        def score_fn(point: dict, qid: str) -> float | None:
            judgments = doc_qrels.get(qid, {})
            if not any(r > 0 for r in judgments.values()):
                return None
            betas = tuple(point.get(f"beta{i}", 1.0) for i in range(1, 6))
            params = RerankParams(
                betas=betas,
                rerank_pool=engine.config.rerank.rerank_pool,
                wa_term_cap=engine.config.rerank.wa_term_cap,
                rd_term_cap=engine.config.rerank.rd_term_cap,
            )
            _, fed = _single_topic_run(engine, topic_map[qid], qid, judgments, cqrels, params)
            return fed
    else:
        if cqrels is None:
            raise click.ClickException("tuning alphas requires --concept-qrels")

        def score_fn(point: dict, qid: str) -> float | None:
            judgments = cqrels.get(qid, {})
            if not any(r > 0 for r in judgments.values()):
                return None
            alphas = tuple(point.get(f"alpha{i}", 1.0) for i in range(1, 5))
            sel = engine.config.selection
            params = ConceptSelectionParams(
                alphas=alphas,
                rank_decay=sel.rank_decay,
                top_n_docs=sel.top_n_docs,
                slate_size=sel.slate_size,
                candidate_pool_size=sel.candidate_pool_size,
            )
            report = engine.concept_selection_ndcg(
                {qid: topic_map[qid]}, cqrels, params
            )
            return report.mean_ndcg if report.per_query else None

    report = tune_cv(sorted(topic_map), grid_points, score_fn, target=target,
                     seed=seed, n_folds=folds)
    for fold in report.folds:
        click.echo(
            f"fold {fold.fold}: best={json.dumps(fold.best_params)} "
            f"train_{target}={fold.train_metric:.4f} test_{target}={fold.test_metric:.4f}"
        )
    click.echo(f"mean held-out {target}: {report.mean_test_metric:.4f}")


def _single_topic_run(engine, text, qid, judgments, cqrels, rerank_params):
    from .evaluation import average_precision, simulate_user as sim_user

    query = engine.make_query(text, qid)
    baseline = engine.baseline(query)
    slate = engine.suggest(query, baseline)
    feedback = sim_user(slate, cqrels.get(qid, {}))
    reranked = engine.reranker.rerank(query, feedback, rerank_params, baseline)
    return average_precision(baseline, judgments), average_precision(reranked, judgments)


@main.command()
@engine_options
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--journal", type=click.Path(), default=None)
@click.option("--static-dir", type=click.Path(exists=True), default=None)
def serve(corpus, kb, annotations, stopwords, stem, host, port, journal, static_dir):
    """Start the HTTP/JSON service (and the web UI if static assets exist)."""
    import uvicorn

    from .api import create_app
    from .session import SessionStore

    engine = build_engine(corpus, kb, annotations, stopwords, stem)
    store = SessionStore(engine, journal_path=journal)
    app = create_app(store, static_dir=static_dir)
    uvicorn.run(app, host=host, port=port)


@main.group()
def session():
    """Thin HTTP client for a running service."""


@session.command("create")
@click.argument("query_text")
@click.option("--base-url", default="http://127.0.0.1:8000", show_default=True)
def session_create(query_text, base_url):
    resp = httpx.post(f"{base_url}/api/sessions", json={"query": query_text})
    resp.raise_for_status()
    body = resp.json()
    click.echo(f"session: {body['session_id']}")
    for i, item in enumerate(body["slate"], 1):
        click.echo(f"{i:4d}  {item['concept_id']}  {item['title']}")


@session.command("feedback")
@click.argument("session_id")
@click.option("--concepts", default="", help="Comma-separated selected concept ids.")
@click.option("--base-url", default="http://127.0.0.1:8000", show_default=True)
def session_feedback(session_id, concepts, base_url):
    selected = [c.strip() for c in concepts.split(",") if c.strip()]
    resp = httpx.post(
        f"{base_url}/api/sessions/{session_id}/feedback", json={"selected": selected}
    )
    resp.raise_for_status()
    click.echo(f"step: {resp.json()['step']}")


@session.command("results")
@click.argument("session_id")
@click.option("--offset", default=0, show_default=True)
@click.option("--limit", default=10, show_default=True)
@click.option("--base-url", default="http://127.0.0.1:8000", show_default=True)
def session_results(session_id, offset, limit, base_url):
    resp = httpx.get(
        f"{base_url}/api/sessions/{session_id}/results",
        params={"offset": offset, "limit": limit},
    )
    resp.raise_for_status()
    for row in resp.json()["results"]:
        click.echo(f"{row['rank']:4d}  {row['score']:10.4f}  {row['doc_id']}  {row['title']}")


if __name__ == "__main__":
    main()
