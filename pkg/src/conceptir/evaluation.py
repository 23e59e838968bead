"""Retrieval metrics, qrels IO, the simulated user, and cross-validated tuning."""

from __future__ import annotations

import itertools
import math
import random
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from scipy import stats as scipy_stats

from .index import RankedList
from .rerank import UserFeedback
from .selection import ConceptSlate


def load_qrels(path: str | Path) -> dict[str, dict[str, int]]:
    """TREC qrels format: 'query_id 0 item_id relevance', whitespace separated."""
    qrels: dict[str, dict[str, int]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 4:
                raise ValueError(f"malformed qrels line {lineno}: {line.rstrip()!r}")
            qid, _, item, rel = parts
            qrels.setdefault(qid, {})[item] = int(rel)
    return qrels


def relevant_set(judgments: dict[str, int]) -> set[str]:
    return {item for item, rel in judgments.items() if rel > 0}


def average_precision(ranking: RankedList, judgments: dict[str, int]) -> float:
    """Mean precision at each relevant rank; unretrieved relevant docs count 0."""
    relevant = relevant_set(judgments)
    if not relevant:
        raise ValueError("no judged-relevant documents for this query")
    hits = 0
    total = 0.0
    for entry in ranking.entries:
        if entry.doc_id in relevant:
            hits += 1
            total += hits / entry.rank
    return total / len(relevant)


def precision_at_k(ranking: RankedList, judgments: dict[str, int], k: int = 10) -> float:
    relevant = relevant_set(judgments)
    hits = sum(1 for e in ranking.entries[:k] if e.doc_id in relevant)
    return hits / k


def ndcg(ranked_ids: Sequence[str], judgments: dict[str, int]) -> float:
    """Binary-gain NDCG: DCG over the ranking divided by the ideal DCG."""
    relevant = relevant_set(judgments)
    if not relevant:
        raise ValueError("no judged-relevant items for this query")
    dcg = sum(
        1.0 / math.log2(i + 1)
        for i, item in enumerate(ranked_ids, 1)
        if item in relevant
    )
    idcg = sum(1.0 / math.log2(i + 1) for i in range(1, len(relevant) + 1))
    return dcg / idcg


def simulate_user(
    slate: ConceptSlate,
    judgments: dict[str, int],
    noise: float = 0.0,
    seed: int = 0,
) -> UserFeedback:
    """Oracle selection of the judged-relevant slate concepts.

    With noise rate p each per-concept decision flips independently under a
    seeded generator, modeling worker error.
    """
    relevant = relevant_set(judgments)
    rng = random.Random(seed)
    selected = set()
    for cid in slate.concept_ids():
        pick = cid in relevant
        if noise > 0.0 and rng.random() < noise:
            pick = not pick
        if pick:
            selected.add(cid)
    return UserFeedback(query_id=slate.query_id, selected_concepts=frozenset(selected))


@dataclass
class QueryMetrics:
    query_id: str
    average_precision: float | None = None
    precision_at_10: float | None = None
    ndcg: float | None = None
    skipped: bool = False


@dataclass
class EvalReport:
    per_query: list[QueryMetrics] = field(default_factory=list)
    skipped_queries: list[str] = field(default_factory=list)

    def _mean(self, attr: str) -> float:
        values = [getattr(q, attr) for q in self.per_query if getattr(q, attr) is not None]
        return sum(values) / len(values) if values else 0.0

    @property
    def map(self) -> float:
        return self._mean("average_precision")

    @property
    def mean_p10(self) -> float:
        return self._mean("precision_at_10")

    @property
    def mean_ndcg(self) -> float:
        return self._mean("ndcg")


def paired_ttest(a: Sequence[float], b: Sequence[float]) -> tuple[float, float]:
    """Paired t-test over per-query metrics; returns (statistic, p-value)."""
    result = scipy_stats.ttest_rel(a, b)
    return float(result.statistic), float(result.pvalue)


@dataclass
class FoldResult:
    fold: int
    train_topics: list[str]
    test_topics: list[str]
    best_params: dict
    train_metric: float
    test_metric: float


@dataclass
class TuneReport:
    seed: int
    target: str
    folds: list[FoldResult]

    @property
    def mean_test_metric(self) -> float:
        return sum(f.test_metric for f in self.folds) / len(self.folds)


def expand_grid(grid: dict[str, Iterable]) -> list[dict]:
    """Cartesian product of per-parameter value lists, in insertion order."""
    if not grid:
        raise ValueError("empty parameter grid")
    keys = list(grid)
    return [dict(zip(keys, combo)) for combo in itertools.product(*(grid[k] for k in keys))]


def tune_cv(
    topic_ids: Sequence[str],
    grid: Sequence[dict],
    score_fn: Callable[[dict, str], float | None],
    target: str = "map",
    seed: int = 0,
    n_folds: int = 2,
) -> TuneReport:
    """Cross-validated grid search.

    Topics are split into folds by a seeded shuffle; the grid point maximizing
    the macro-averaged target on the training fold is applied to the held-out
    fold. ``score_fn(params, topic_id)`` returns the per-topic metric, or None
    for topics that must be skipped. Grid ties break by first-in-grid order.
    """
    if len(topic_ids) < n_folds:
        raise ValueError(f"need at least {n_folds} topics")
    if not grid:
        raise ValueError("empty parameter grid")
    topics = list(topic_ids)
    random.Random(seed).shuffle(topics)
    folds = [topics[i::n_folds] for i in range(n_folds)]

    def macro(params: dict, ids: Sequence[str]) -> float:
        values = [v for v in (score_fn(params, t) for t in ids) if v is not None]
        return sum(values) / len(values) if values else 0.0

    results = []
    for i, test in enumerate(folds):
        train = [t for j, f in enumerate(folds) if j != i for t in f]
        best_params, best_metric = None, -math.inf
        for params in grid:
            metric = macro(params, train)
            if metric > best_metric:  # strict: ties keep the earlier grid point
                best_params, best_metric = params, metric
        results.append(
            FoldResult(
                fold=i,
                train_topics=sorted(train),
                test_topics=sorted(test),
                best_params=best_params,
                train_metric=best_metric,
                test_metric=macro(best_params, test),
            )
        )
    return TuneReport(seed=seed, target=target, folds=results)
