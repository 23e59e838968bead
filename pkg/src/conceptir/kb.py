"""Concept knowledge base: titles, article texts, anchor texts, term weights."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .tokenizer import Tokenizer


class KbError(ValueError):
    """Raised for malformed or inconsistent knowledge-base records."""


@dataclass
class Concept:
    concept_id: str
    title: str
    article_text: str = ""
    anchors: list[tuple[str, int]] = field(default_factory=list)  # (text, occurrence_count)
    url: str | None = None


@dataclass
class KbStats:
    num_concepts: int
    avg_title_length: float
    avg_article_length: float
    avg_anchor_length: float  # mean token length over all distinct anchor strings KB-wide


class KnowledgeBase:
    """Write-once concept store with the per-source term weights.

    All three weight functions share the saturation form
    tf / (tf + 0.5 + 1.5 * length/avgLength), each with its own source text
    and KB-wide average length.
    """

    def __init__(self, tokenizer: Tokenizer | None = None):
        self.tokenizer = tokenizer or Tokenizer()
        self.concepts: dict[str, Concept] = {}
        self._title_tf: dict[str, Counter] = {}
        self._title_len: dict[str, int] = {}
        self._article_tf: dict[str, Counter] = {}
        self._article_len: dict[str, int] = {}
        # concept -> list of (anchor tf counter, anchor token length), one per distinct string
        self._anchor_tokens: dict[str, list[tuple[Counter, int]]] = {}
        self._title_term_index: dict[str, set[str]] = {}  # term -> concept ids
        self._stats_cache: KbStats | None = None

    def add_concept(self, concept: Concept) -> None:
        self._stats_cache = None
        if concept.concept_id in self.concepts:
            raise KbError(f"duplicate concept_id: {concept.concept_id!r}")
        if not concept.title.strip():
            raise KbError(f"empty title for concept {concept.concept_id!r}")
        # Merge duplicate anchor strings; Eq-style anchor sums treat A_c as a set.
        merged: dict[str, int] = {}
        for text, count in concept.anchors:
            if count < 1:
                raise KbError(
                    f"anchor occurrence_count < 1 for concept {concept.concept_id!r}"
                )
            merged[text] = merged.get(text, 0) + count
        concept.anchors = sorted(merged.items())

        cid = concept.concept_id
        self.concepts[cid] = concept
        title_tokens = self.tokenizer(concept.title)
        self._title_tf[cid] = Counter(title_tokens)
        self._title_len[cid] = len(title_tokens)
        article_tokens = self.tokenizer(concept.article_text)
        self._article_tf[cid] = Counter(article_tokens)
        self._article_len[cid] = len(article_tokens)
        self._anchor_tokens[cid] = []
        for text, _count in concept.anchors:
            tokens = self.tokenizer(text)
            self._anchor_tokens[cid].append((Counter(tokens), len(tokens)))
        for term in set(title_tokens):
            self._title_term_index.setdefault(term, set()).add(cid)

    def load_kb(self, path: str | Path) -> KbStats:
        """Load a line-delimited JSON KB:
        {concept_id, title, article_text?, anchors?: [{text, count}], url?} per line.
        """
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    rec = json.loads(line)
                    concept = Concept(
                        concept_id=str(rec["concept_id"]),
                        title=rec["title"],
                        article_text=rec.get("article_text", ""),
                        anchors=[
                            (a["text"], int(a.get("count", 1)))
                            for a in rec.get("anchors", [])
                        ],
                        url=rec.get("url"),
                    )
                except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                    raise KbError(f"malformed KB record at line {lineno}: {exc}") from exc
                self.add_concept(concept)
        return self.stats()

    def stats(self) -> KbStats:
        if self._stats_cache is not None:
            return self._stats_cache
        n = len(self.concepts)
        anchor_lengths = [
            length for per in self._anchor_tokens.values() for _tf, length in per
        ]
        self._stats_cache = KbStats(
            num_concepts=n,
            avg_title_length=sum(self._title_len.values()) / n if n else 0.0,
            avg_article_length=sum(self._article_len.values()) / n if n else 0.0,
            avg_anchor_length=(
                sum(anchor_lengths) / len(anchor_lengths) if anchor_lengths else 0.0
            ),
        )
        return self._stats_cache

    def __contains__(self, concept_id: str) -> bool:
        return concept_id in self.concepts

    def __len__(self) -> int:
        return len(self.concepts)

    def _require(self, concept_id: str) -> Concept:
        try:
            return self.concepts[concept_id]
        except KeyError:
            raise KeyError(f"unknown concept_id: {concept_id!r}") from None

    def concepts_with_title_term(self, term: str) -> set[str]:
        return self._title_term_index.get(term, set())

    def title_terms(self, concept_id: str) -> set[str]:
        self._require(concept_id)
        return set(self._title_tf[concept_id])

    def article_terms(self, concept_id: str) -> set[str]:
        self._require(concept_id)
        return set(self._article_tf[concept_id])

    def anchor_terms(self, concept_id: str) -> set[str]:
        self._require(concept_id)
        terms: set[str] = set()
        for tf, _length in self._anchor_tokens[concept_id]:
            terms.update(tf)
        return terms

    # -- term weights ----------------------------------------------------------

    @staticmethod
    def _saturate(tf: int, length: int, avg_length: float) -> float:
        if tf == 0:
            return 0.0
        norm = length / avg_length if avg_length > 0 else 0.0
        return tf / (tf + 0.5 + 1.5 * norm)

    def title_term_weight(self, term: str, concept_id: str) -> float:
        self._require(concept_id)
        return self._saturate(
            self._title_tf[concept_id].get(term, 0),
            self._title_len[concept_id],
            self.stats().avg_title_length,
        )

    def article_term_weight(self, term: str, concept_id: str) -> float:
        self._require(concept_id)
        return self._saturate(
            self._article_tf[concept_id].get(term, 0),
            self._article_len[concept_id],
            self.stats().avg_article_length,
        )

    def anchor_term_weight(self, term: str, concept_id: str) -> float:
        self._require(concept_id)
        avg = self.stats().avg_anchor_length
        return sum(
            self._saturate(tf.get(term, 0), length, avg)
            for tf, length in self._anchor_tokens[concept_id]
        )
