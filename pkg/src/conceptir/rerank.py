"""Document re-ranking from user feedback on concepts."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .annotate import AnnotationStore, concept_doc_weight, related_docs_term_weight
from .index import CorpusIndex, Query, RankedEntry, RankedList
from .kb import KnowledgeBase
from .selection import SOURCES, z_normalize


@dataclass(frozen=True)
class UserFeedback:
    query_id: str
    selected_concepts: frozenset[str] = frozenset()


@dataclass
class RelevanceModel:
    source: str
    weights: dict[str, float] = field(default_factory=dict)
    cap: int | None = None


@dataclass
class RerankParams:
    betas: tuple[float, float, float, float, float] = (1.0, 1.0, 1.0, 1.0, 1.0)
    rerank_pool: int = 1000
    wa_term_cap: int = 20
    rd_term_cap: int = 20

    def __post_init__(self) -> None:
        if self.rerank_pool < 1:
            raise ValueError("rerank_pool must be >= 1")


class Reranker:
    """Builds concept-derived relevance models and fuses six document scores."""

    def __init__(self, index: CorpusIndex, kb: KnowledgeBase, annotations: AnnotationStore):
        self.index = index
        self.kb = kb
        self.annotations = annotations

    def score_cm(self, doc_id: str, feedback: UserFeedback) -> float:
        """Overlap between selected concepts and the doc's annotations."""
        return sum(
            concept_doc_weight(self.annotations, self.index, cid, doc_id)
            for cid in feedback.selected_concepts
        )

    def _source_vocabulary(self, source: str, concept_id: str) -> set[str]:
        if source == "CT":
            return self.kb.title_terms(concept_id)
        if source == "WA":
            return self.kb.article_terms(concept_id)
        if source == "AT":
            return self.kb.anchor_terms(concept_id)
        if source == "RD":
            terms: set[str] = set()
            for doc_id in self.annotations.docs_for(concept_id):
                doc = self.index.docs[doc_id]
                terms.update(self.index.tokenizer(doc.title + " " + doc.body))
            return terms
        raise ValueError(f"unknown source: {source!r}")

    def _source_term_weight(self, source: str, term: str, concept_id: str) -> float:
        if source == "CT":
            return self.kb.title_term_weight(term, concept_id)
        if source == "WA":
            return self.kb.article_term_weight(term, concept_id)
        if source == "AT":
            return self.kb.anchor_term_weight(term, concept_id)
        return related_docs_term_weight(self.annotations, self.index, term, concept_id)

    def build_relevance_model(
        self, feedback: UserFeedback, source: str, params: RerankParams | None = None
    ) -> RelevanceModel:
        """Weighted expansion terms summed over the selected concepts.

        WA and RD vocabularies are corpus/article sized, so they keep only the
        top terms by weight * idf; CT and AT stay uncapped.
        """
        params = params or RerankParams()
        cap = {"WA": params.wa_term_cap, "RD": params.rd_term_cap}.get(source)
        weights: dict[str, float] = {}
        if source == "RD":
            # One pass per related doc: each doc contributes w(t,d)*w(c,d) to
            # every term it contains, which equals the per-term sum.
            for cid in feedback.selected_concepts:
                for doc_id in self.annotations.docs_for(cid):
                    cw = concept_doc_weight(self.annotations, self.index, cid, doc_id)
                    doc = self.index.docs[doc_id]
                    for term in set(self.index.tokenizer(doc.title + " " + doc.body)):
                        weights[term] = weights.get(term, 0.0) + cw * self.index.term_doc_weight(
                            term, doc_id
                        )
        else:
            for cid in feedback.selected_concepts:
                for term in self._source_vocabulary(source, cid):
                    w = self._source_term_weight(source, term, cid)
                    if w > 0.0:
                        weights[term] = weights.get(term, 0.0) + w
        if cap is not None and len(weights) > cap:
            keep = sorted(
                weights.items(), key=lambda kv: (-kv[1] * self.index.idf(kv[0]), kv[0])
            )[:cap]
            weights = dict(keep)
        return RelevanceModel(source=source, weights=weights, cap=cap)

    def score_by_model(self, doc_id: str, model: RelevanceModel) -> float:
        """Expansion-term match: weight * doc term weight * IDF, summed."""
        return sum(
            w * self.index.term_doc_weight(term, doc_id) * self.index.idf(term)
            for term, w in model.weights.items()
        )

    def rerank(
        self,
        query: Query,
        feedback: UserFeedback,
        params: RerankParams | None = None,
        baseline: RankedList | None = None,
    ) -> RankedList:
        ranking, _ = self.rerank_with_components(query, feedback, params, baseline)
        return ranking

    def rerank_with_components(
        self,
        query: Query,
        feedback: UserFeedback,
        params: RerankParams | None = None,
        baseline: RankedList | None = None,
    ) -> tuple[RankedList, dict[str, dict[str, float]]]:
        """Re-score the top of the baseline ranking with the six-way fusion.

        Also returns the raw per-source score of each pooled doc, keyed
        IQ/CM/CT/WA/AT/RD, for run exports and inspection.
        """
        params = params or RerankParams()
        if baseline is None:
            baseline = self.index.rank_initial(query, params.rerank_pool)
        pool = baseline.entries[: params.rerank_pool]
        if not pool:
            return RankedList(), {}

        models = {
            src: self.build_relevance_model(feedback, src, params) for src in SOURCES
        }
        doc_ids = [e.doc_id for e in pool]
        vectors = {
            "IQ": [e.score for e in pool],
            "CM": [self.score_cm(d, feedback) for d in doc_ids],
        }
        for src in SOURCES:
            vectors[src] = [self.score_by_model(d, models[src]) for d in doc_ids]

        weights = dict(zip(("CM",) + SOURCES, params.betas))
        weights["IQ"] = 1.0
        normalized = {name: z_normalize(vec) for name, vec in vectors.items()}
        fused = {
            d: sum(weights[name] * normalized[name][i] for name in normalized)
            for i, d in enumerate(doc_ids)
        }
        components = {
            name: dict(zip(doc_ids, vec)) for name, vec in vectors.items()
        }
        return RankedList.from_scores(fused), components


def export_run(
    path: str | Path,
    query_id: str,
    ranking: RankedList,
    run_tag: str = "conceptir",
) -> None:
    """Append a ranking in TREC run format: qid Q0 doc rank score tag."""
    with open(path, "a", encoding="utf-8") as fh:
        for e in ranking.entries:
            fh.write(f"{query_id} Q0 {e.doc_id} {e.rank} {e.score:.6f} {run_tag}\n")


def export_components(
    path: str | Path,
    query_id: str,
    ranking: RankedList,
    components: dict[str, dict[str, float]] | None = None,
) -> None:
    """Write a ranking with per-source component scores as line-delimited JSON."""
    with open(path, "a", encoding="utf-8") as fh:
        for e in ranking.entries:
            rec = {"query_id": query_id, "rank": e.rank, "doc_id": e.doc_id, "score": e.score}
            if components:
                rec.update({k: v.get(e.doc_id, 0.0) for k, v in components.items()})
            fh.write(json.dumps(rec) + "\n")
