"""Concept scoring, z-normalized fusion, and slate selection for a query."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .annotate import AnnotationStore, concept_doc_weight, related_docs_term_weight
from .index import CorpusIndex, Query, RankedList
from .kb import KnowledgeBase

SOURCES = ("CT", "WA", "AT", "RD")


def z_normalize(scores: list[float]) -> list[float]:
    """Rescale to mean 0, population standard deviation 1.

    Zero-variance inputs (and lists shorter than 2) map to all zeros so the
    additive fusion stays well defined.
    """
    n = len(scores)
    if n < 2:
        return [0.0] * n
    mean = sum(scores) / n
    var = sum((x - mean) ** 2 for x in scores) / n
    if var == 0.0:
        return [0.0] * n
    sigma = math.sqrt(var)
    return [(x - mean) / sigma for x in scores]


@dataclass
class ConceptSelectionParams:
    alphas: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)
    rank_decay: float = 0.5      # exponent on 1/rank when pooling top-doc evidence
    top_n_docs: int = 100
    slate_size: int = 20
    candidate_pool_size: int = 200

    def __post_init__(self) -> None:
        if self.slate_size > self.candidate_pool_size:
            raise ValueError("slate_size must not exceed candidate_pool_size")
        if self.top_n_docs < 1:
            raise ValueError("top_n_docs must be >= 1")


@dataclass
class ConceptScore:
    concept_id: str
    td: float = 0.0
    ct: float = 0.0
    wa: float = 0.0
    at: float = 0.0
    rd: float = 0.0
    combined: float = 0.0

    def component(self, source: str) -> float:
        return getattr(self, source.lower())


@dataclass(frozen=True)
class SlateEntry:
    concept_id: str
    score: float
    title: str
    url: str | None = None


@dataclass
class ConceptSlate:
    query_id: str
    entries: list[SlateEntry] = field(default_factory=list)

    def concept_ids(self) -> list[str]:
        return [e.concept_id for e in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


class ConceptSelector:
    """Scores candidate concepts with five evidence sources and fuses them."""

    def __init__(self, index: CorpusIndex, kb: KnowledgeBase, annotations: AnnotationStore):
        self.index = index
        self.kb = kb
        self.annotations = annotations

    def query_term_weight(self, query: Query, term: str) -> float:
        tf = query.term_counts.get(term, 0)
        return tf / (tf + 2.0)

    def source_term_weight(self, source: str, term: str, concept_id: str) -> float:
        if source == "CT":
            return self.kb.title_term_weight(term, concept_id)
        if source == "WA":
            return self.kb.article_term_weight(term, concept_id)
        if source == "AT":
            return self.kb.anchor_term_weight(term, concept_id)
        if source == "RD":
            return related_docs_term_weight(self.annotations, self.index, term, concept_id)
        raise ValueError(f"unknown source: {source!r}")

    def score_td(
        self, concept_id: str, initial_ranking: RankedList, rank_decay: float, top_n: int
    ) -> float:
        """Concept evidence from the top ranked documents, decayed by rank."""
        total = 0.0
        for entry in initial_ranking.entries[:top_n]:
            w = concept_doc_weight(self.annotations, self.index, concept_id, entry.doc_id)
            if w:
                total += w * entry.rank ** (-rank_decay)
        return total

    def query_match_score(self, query: Query, concept_id: str, source: str) -> float:
        """Term match between query and concept evidence, IDF weighted."""
        return sum(
            self.query_term_weight(query, term)
            * self.source_term_weight(source, term, concept_id)
            * self.index.idf(term)
            for term in query.term_counts
        )

    def _candidate_pool(
        self, query: Query, initial_ranking: RankedList, params: ConceptSelectionParams
    ) -> tuple[list[str], dict[str, float]]:
        # Concepts annotated in the top-N docs, ranked by TD, truncated to the
        # pool size; plus every concept whose title shares a query term.
        td: dict[str, float] = {}
        for entry in initial_ranking.entries[: params.top_n_docs]:
            for cid in self.annotations.concepts_for(entry.doc_id):
                if cid not in td:
                    td[cid] = self.score_td(
                        cid, initial_ranking, params.rank_decay, params.top_n_docs
                    )
        pool = {
            cid
            for cid, _ in sorted(td.items(), key=lambda kv: (-kv[1], kv[0]))[
                : params.candidate_pool_size
            ]
        }
        for term in query.term_counts:
            pool.update(self.kb.concepts_with_title_term(term))
        return sorted(pool), td

    def score_candidates(
        self,
        query: Query,
        params: ConceptSelectionParams | None = None,
        initial_ranking: RankedList | None = None,
    ) -> list[ConceptScore]:
        """All component scores plus the normalized fusion, over the candidate pool."""
        params = params or ConceptSelectionParams()
        if initial_ranking is None:
            initial_ranking = self.index.rank_initial(query, params.top_n_docs)
        pool, td = self._candidate_pool(query, initial_ranking, params)
        scores = []
        for cid in pool:
            scores.append(
                ConceptScore(
                    concept_id=cid,
                    td=td.get(cid, 0.0),  # concepts absent from top-N docs score 0 by definition
                    ct=self.query_match_score(query, cid, "CT"),
                    wa=self.query_match_score(query, cid, "WA"),
                    at=self.query_match_score(query, cid, "AT"),
                    rd=self.query_match_score(query, cid, "RD"),
                )
            )
        weights = (1.0,) + tuple(params.alphas)
        columns = [
            z_normalize([s.component(src) for s in scores])
            for src in ("TD",) + SOURCES
        ]
        for i, s in enumerate(scores):
            s.combined = sum(w * col[i] for w, col in zip(weights, columns))
        return scores

    def select_concepts(
        self,
        query: Query,
        params: ConceptSelectionParams | None = None,
        initial_ranking: RankedList | None = None,
    ) -> ConceptSlate:
        params = params or ConceptSelectionParams()
        scores = self.score_candidates(query, params, initial_ranking)
        scores.sort(key=lambda s: (-s.combined, s.concept_id))
        entries = []
        for s in scores[: params.slate_size]:
            concept = self.kb.concepts[s.concept_id]
            entries.append(SlateEntry(s.concept_id, s.combined, concept.title, concept.url))
        return ConceptSlate(query.query_id, entries)


def export_scores(
    path: str | Path, query_id: str, scores: list[ConceptScore]
) -> None:
    """Write ranked concept scores as line-delimited JSON."""
    ordered = sorted(scores, key=lambda s: (-s.combined, s.concept_id))
    with open(path, "w", encoding="utf-8") as fh:
        for rank, s in enumerate(ordered, 1):
            fh.write(
                json.dumps(
                    {
                        "query_id": query_id,
                        "rank": rank,
                        "concept_id": s.concept_id,
                        "combined": s.combined,
                        "td": s.td,
                        "ct": s.ct,
                        "wa": s.wa,
                        "at": s.at,
                        "rd": s.rd,
                    }
                )
                + "\n"
            )
