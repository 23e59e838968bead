"""Corpus ingestion, inverted index, and initial-query BM25 ranking."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .tokenizer import Tokenizer


class IngestError(ValueError):
    """Raised for malformed corpus records or duplicate ids."""


@dataclass
class Document:
    doc_id: str
    title: str
    body: str
    token_count: int


@dataclass
class Query:
    query_id: str
    raw_text: str
    term_counts: dict[str, int]

    @classmethod
    def from_text(cls, text: str, tokenizer: Tokenizer, query_id: str = "q") -> "Query":
        return cls(query_id=query_id, raw_text=text, term_counts=dict(Counter(tokenizer(text))))


@dataclass(frozen=True)
class RankedEntry:
    doc_id: str
    score: float
    rank: int


@dataclass
class RankedList:
    entries: list[RankedEntry] = field(default_factory=list)

    @classmethod
    def from_scores(cls, scores: dict[str, float], k: int | None = None) -> "RankedList":
        # Ties broken by ascending doc_id so rankings are deterministic.
        ordered = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
        if k is not None:
            ordered = ordered[:k]
        return cls([RankedEntry(d, s, i + 1) for i, (d, s) in enumerate(ordered)])

    def doc_ids(self) -> list[str]:
        return [e.doc_id for e in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass
class CorpusStats:
    num_docs: int
    avg_doc_length: float


class CorpusIndex:
    """Write-once inverted index with the statistics BM25-family weights need."""

    def __init__(self, tokenizer: Tokenizer | None = None, k1: float = 1.2, b: float = 0.75):
        self.tokenizer = tokenizer or Tokenizer()
        self.k1 = k1
        self.b = b
        self.docs: dict[str, Document] = {}
        self._tf: dict[str, dict[str, int]] = {}  # term -> doc_id -> tf
        self._total_tokens = 0

    # -- ingestion -----------------------------------------------------------

    def add_document(self, doc_id: str, title: str, body: str) -> Document:
        if doc_id in self.docs:
            raise IngestError(f"duplicate doc_id: {doc_id!r}")
        tokens = self.tokenizer(title + " " + body)
        doc = Document(doc_id, title, body, len(tokens))
        self.docs[doc_id] = doc
        self._total_tokens += len(tokens)
        for term, tf in Counter(tokens).items():
            self._tf.setdefault(term, {})[doc_id] = tf
        return doc

    def ingest_corpus(self, path: str | Path) -> CorpusStats:
        """Load a line-delimited JSON corpus: {doc_id, title, body} per line."""
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    rec = json.loads(line)
                    doc_id, title, body = rec["doc_id"], rec.get("title", ""), rec["body"]
                except (json.JSONDecodeError, KeyError, TypeError) as exc:
                    raise IngestError(f"malformed corpus record at line {lineno}: {exc}") from exc
                self.add_document(str(doc_id), title, body)
        return self.stats()

    # -- statistics ----------------------------------------------------------

    def stats(self) -> CorpusStats:
        n = len(self.docs)
        return CorpusStats(n, self._total_tokens / n if n else 0.0)

    @property
    def num_docs(self) -> int:
        return len(self.docs)

    @property
    def avg_doc_length(self) -> float:
        return self.stats().avg_doc_length

    def doc_length(self, doc_id: str) -> int:
        return self.docs[doc_id].token_count

    def term_frequency(self, term: str, doc_id: str) -> int:
        return self._tf.get(term, {}).get(doc_id, 0)

    def document_frequency(self, term: str) -> int:
        return len(self._tf.get(term, {}))

    def postings(self, term: str) -> list[tuple[str, int]]:
        return sorted(self._tf.get(term, {}).items())

    @property
    def terms(self) -> list[str]:
        return list(self._tf)

    # -- scoring -------------------------------------------------------------

    def idf(self, term: str) -> float:
        """ln(1 + (N - df + 0.5)/(df + 0.5)); always positive."""
        n, df = self.num_docs, self.document_frequency(term)
        return math.log(1.0 + (n - df + 0.5) / (df + 0.5))

    def term_doc_weight(self, term: str, doc_id: str) -> float:
        """tf / (tf + 0.5 + 1.5 * length(d)/avgDocLength); 0 when absent."""
        tf = self.term_frequency(term, doc_id)
        if tf == 0:
            return 0.0
        return tf / (tf + 0.5 + 1.5 * self.doc_length(doc_id) / self.avg_doc_length)

    def bm25_score(self, query: Query, doc_id: str) -> float:
        if doc_id not in self.docs:
            raise KeyError(f"unknown doc_id: {doc_id!r}")
        length_norm = self.k1 * (
            1.0 - self.b + self.b * self.doc_length(doc_id) / self.avg_doc_length
        )
        score = 0.0
        for term, qtf in query.term_counts.items():
            tf = self.term_frequency(term, doc_id)
            if tf == 0:
                continue
            score += qtf * self.idf(term) * tf / (tf + length_norm)
        return score

    def rank_initial(self, query: Query, k: int) -> RankedList:
        """Top-k documents by BM25 over the docs matching any query term."""
        if k <= 0 or not self.docs:
            return RankedList()
        candidates: set[str] = set()
        for term in query.term_counts:
            candidates.update(self._tf.get(term, {}))
        scores = {d: self.bm25_score(query, d) for d in candidates}
        if len(scores) < k:
            # Non-matching docs all score exactly 0; pad so the ranking covers
            # the whole corpus when k asks for it.
            for doc_id in self.docs:
                if doc_id not in scores:
                    scores[doc_id] = 0.0
        return RankedList.from_scores(scores, k)
