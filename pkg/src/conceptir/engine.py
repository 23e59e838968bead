"""Engine assembly: immutable stores plus the query/suggest/rerank pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .annotate import AnnotationStore, DictionaryAnnotator, load_annotations
from .evaluation import (
    EvalReport,
    QueryMetrics,
    average_precision,
    ndcg,
    precision_at_k,
    simulate_user,
)
from .index import CorpusIndex, Query, RankedList
from .kb import KnowledgeBase
from .rerank import Reranker, RerankParams, UserFeedback
from .selection import ConceptSelectionParams, ConceptSelector, ConceptSlate
from .tokenizer import Tokenizer, load_stopwords


@dataclass
class EngineConfig:
    k1: float = 1.2
    b: float = 0.75
    stopwords_path: str | None = None
    stem: bool = False
    selection: ConceptSelectionParams = field(default_factory=ConceptSelectionParams)
    rerank: RerankParams = field(default_factory=RerankParams)

    def make_tokenizer(self) -> Tokenizer:
        if self.stopwords_path:
            return Tokenizer(stopwords=load_stopwords(self.stopwords_path), stem=self.stem)
        return Tokenizer(stem=self.stem)


class Engine:
    """Loaded index + KB + annotations behind the interactive pipeline.

    All stores are write-once at build time and immutable afterwards, so any
    number of concurrent readers may query without coordination.
    """

    def __init__(
        self,
        index: CorpusIndex,
        kb: KnowledgeBase,
        annotations: AnnotationStore,
        config: EngineConfig | None = None,
    ):
        self.index = index
        self.kb = kb
        self.annotations = annotations
        self.config = config or EngineConfig()
        self.selector = ConceptSelector(index, kb, annotations)
        self.reranker = Reranker(index, kb, annotations)

    @classmethod
    def build(
        cls,
        corpus_path: str | Path,
        kb_path: str | Path,
        annotations_path: str | Path | None = None,
        config: EngineConfig | None = None,
    ) -> "Engine":
        config = config or EngineConfig()
        tokenizer = config.make_tokenizer()
        index = CorpusIndex(tokenizer, k1=config.k1, b=config.b)
        index.ingest_corpus(corpus_path)
        kb = KnowledgeBase(tokenizer)
        kb.load_kb(kb_path)
        if annotations_path:
            annotations = load_annotations(annotations_path, index, kb)
        else:
            annotations = DictionaryAnnotator(kb).annotate_corpus(index)
        return cls(index, kb, annotations, config)

    # -- pipeline --------------------------------------------------------------

    def make_query(self, text: str, query_id: str = "q") -> Query:
        return Query.from_text(text, self.index.tokenizer, query_id)

    def baseline(self, query: Query, k: int | None = None) -> RankedList:
        return self.index.rank_initial(query, k or self.config.rerank.rerank_pool)

    def suggest(self, query: Query, baseline: RankedList | None = None) -> ConceptSlate:
        return self.selector.select_concepts(query, self.config.selection, baseline)

    def rerank(
        self,
        query: Query,
        selected_concepts: set[str] | frozenset[str],
        baseline: RankedList | None = None,
    ) -> RankedList:
        feedback = UserFeedback(query.query_id, frozenset(selected_concepts))
        return self.reranker.rerank(query, feedback, self.config.rerank, baseline)

    def snippet(self, doc_id: str, query: Query, width: int = 200) -> str:
        """A ~200-char excerpt of the body around the first query-term hit."""
        body = self.index.docs[doc_id].body
        lowered = body.lower()
        start = 0
        positions = [lowered.find(t) for t in query.term_counts]
        positions = [p for p in positions if p >= 0]
        if positions:
            start = min(positions)
        return body[start : start + width]

    # -- batch evaluation --------------------------------------------------------

    def evaluate_feedback_run(
        self,
        topics: dict[str, str],
        doc_qrels: dict[str, dict[str, int]],
        concept_qrels: dict[str, dict[str, int]] | None = None,
        simulate: bool = True,
        noise: float = 0.0,
        seed: int = 0,
        selections: dict[str, set[str]] | None = None,
    ) -> tuple[EvalReport, EvalReport]:
        """Run baseline and feedback rankings per topic; return both reports.

        Feedback comes either from explicit ``selections`` or from the
        simulated user against ``concept_qrels``.
        """
        baseline_report, feedback_report = EvalReport(), EvalReport()
        for qid in sorted(topics):
            judgments = doc_qrels.get(qid, {})
            if not any(rel > 0 for rel in judgments.values()):
                baseline_report.skipped_queries.append(qid)
                feedback_report.skipped_queries.append(qid)
                continue
            query = self.make_query(topics[qid], qid)
            baseline = self.baseline(query)
            if selections is not None:
                selected = selections.get(qid, set())
            elif simulate and concept_qrels is not None:
                slate = self.suggest(query, baseline)
                selected = set(
                    simulate_user(slate, concept_qrels.get(qid, {}), noise, seed).selected_concepts
                )
            else:
                selected = set()
            reranked = self.rerank(query, selected, baseline)
            baseline_report.per_query.append(
                QueryMetrics(
                    qid,
                    average_precision(baseline, judgments),
                    precision_at_k(baseline, judgments),
                )
            )
            feedback_report.per_query.append(
                QueryMetrics(
                    qid,
                    average_precision(reranked, judgments),
                    precision_at_k(reranked, judgments),
                )
            )
        return baseline_report, feedback_report

    def concept_selection_ndcg(
        self,
        topics: dict[str, str],
        concept_qrels: dict[str, dict[str, int]],
        params: ConceptSelectionParams | None = None,
        order_by: str = "combined",
    ) -> EvalReport:
        """NDCG of the candidate-pool concept ranking against the judgments.

        ``order_by`` selects the ranking criterion: 'combined' or one of the
        raw components td/ct/wa/at/rd.
        """
        params = params or self.config.selection
        report = EvalReport()
        for qid in sorted(topics):
            judgments = concept_qrels.get(qid, {})
            if not any(rel > 0 for rel in judgments.values()):
                report.skipped_queries.append(qid)
                continue
            query = self.make_query(topics[qid], qid)
            scores = self.selector.score_candidates(query, params)
            scores.sort(key=lambda s: (-getattr(s, order_by), s.concept_id))
            ranked_ids = [s.concept_id for s in scores]
            report.per_query.append(QueryMetrics(qid, ndcg=ndcg(ranked_ids, judgments)))
        return report
