"""Concept annotation of documents and the annotation-derived weights.

A dictionary matcher stands in for an external wikification tool: concept
titles and anchor strings form a phrase dictionary, documents are scanned
with greedy longest match, and ambiguous strings resolve to the concept with
the highest occurrence count (commonness).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .index import CorpusIndex, Document
from .kb import KnowledgeBase


class AnnotationError(ValueError):
    """Raised for unresolved ids or malformed annotation records."""


@dataclass(frozen=True)
class Annotation:
    doc_id: str
    concept_id: str
    freq: int


@dataclass
class AnnotationStore:
    by_doc: dict[str, dict[str, int]] = field(default_factory=dict)      # doc -> concept -> freq
    by_concept: dict[str, dict[str, int]] = field(default_factory=dict)  # concept -> doc -> freq

    def add(self, annotation: Annotation) -> None:
        if annotation.freq < 1:
            raise AnnotationError(f"freq < 1 for {annotation}")
        doc_map = self.by_doc.setdefault(annotation.doc_id, {})
        if annotation.concept_id in doc_map:
            raise AnnotationError(
                f"duplicate annotation ({annotation.doc_id!r}, {annotation.concept_id!r})"
            )
        doc_map[annotation.concept_id] = annotation.freq
        self.by_concept.setdefault(annotation.concept_id, {})[annotation.doc_id] = annotation.freq

    def freq(self, concept_id: str, doc_id: str) -> int:
        return self.by_doc.get(doc_id, {}).get(concept_id, 0)

    def docs_for(self, concept_id: str) -> dict[str, int]:
        return self.by_concept.get(concept_id, {})

    def concepts_for(self, doc_id: str) -> dict[str, int]:
        return self.by_doc.get(doc_id, {})

    def all_annotations(self) -> list[Annotation]:
        return sorted(
            (Annotation(d, c, f) for d, cm in self.by_doc.items() for c, f in cm.items()),
            key=lambda a: (a.doc_id, a.concept_id),
        )

    def export(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for ann in self.all_annotations():
                fh.write(
                    json.dumps(
                        {"doc_id": ann.doc_id, "concept_id": ann.concept_id, "freq": ann.freq}
                    )
                    + "\n"
                )


def load_annotations(
    path: str | Path, index: CorpusIndex, kb: KnowledgeBase
) -> AnnotationStore:
    """Load externally produced annotations; every id must resolve."""
    store = AnnotationStore()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                ann = Annotation(str(rec["doc_id"]), str(rec["concept_id"]), int(rec["freq"]))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise AnnotationError(
                    f"malformed annotation record at line {lineno}: {exc}"
                ) from exc
            if ann.doc_id not in index.docs:
                raise AnnotationError(f"line {lineno}: unknown doc_id {ann.doc_id!r}")
            if ann.concept_id not in kb:
                raise AnnotationError(f"line {lineno}: unknown concept_id {ann.concept_id!r}")
            store.add(ann)
    return store


class DictionaryAnnotator:
    """Greedy longest-match annotator over concept titles and anchor strings."""

    def __init__(self, kb: KnowledgeBase):
        self.kb = kb
        self.tokenizer = kb.tokenizer
        # token tuple -> (occurrence_count, concept_id); commonness disambiguation,
        # ties by ascending concept_id. Title entries carry count 1.
        self._dictionary: dict[tuple[str, ...], tuple[int, str]] = {}
        self._max_len = 0
        for cid, concept in kb.concepts.items():
            entries = [(concept.title, 1)]
            entries.extend(concept.anchors)
            for text, count in entries:
                key = tuple(self.tokenizer(text))
                if not key:  # stopword-only strings would match degenerately
                    continue
                best = self._dictionary.get(key)
                if (
                    best is None
                    or count > best[0]
                    or (count == best[0] and cid < best[1])
                ):
                    self._dictionary[key] = (count, cid)
                self._max_len = max(self._max_len, len(key))

    def annotate_tokens(self, tokens: list[str]) -> dict[str, int]:
        freqs: dict[str, int] = {}
        i, n = 0, len(tokens)
        while i < n:
            matched = False
            for length in range(min(self._max_len, n - i), 0, -1):
                entry = self._dictionary.get(tuple(tokens[i : i + length]))
                if entry is not None:
                    cid = entry[1]
                    freqs[cid] = freqs.get(cid, 0) + 1
                    i += length
                    matched = True
                    break
            if not matched:
                i += 1
        return freqs

    def annotate_document(self, doc: Document) -> list[Annotation]:
        tokens = self.tokenizer(doc.title + " " + doc.body)
        freqs = self.annotate_tokens(tokens)
        return [Annotation(doc.doc_id, cid, f) for cid, f in sorted(freqs.items())]

    def annotate_corpus(self, index: CorpusIndex) -> AnnotationStore:
        store = AnnotationStore()
        for doc_id in sorted(index.docs):
            for ann in self.annotate_document(index.docs[doc_id]):
                store.add(ann)
        return store


def concept_doc_weight(
    store: AnnotationStore, index: CorpusIndex, concept_id: str, doc_id: str
) -> float:
    """freq / (freq + 0.5 + 1.5 * length(d)/avgDocLength); 0 if unannotated."""
    freq = store.freq(concept_id, doc_id)
    if freq == 0:
        return 0.0
    return freq / (freq + 0.5 + 1.5 * index.doc_length(doc_id) / index.avg_doc_length)


def related_docs_term_weight(
    store: AnnotationStore, index: CorpusIndex, term: str, concept_id: str
) -> float:
    """Sum of term weight times concept weight over the concept's related docs.

    Only docs annotated with the concept contribute; all other addends are 0.
    """
    return sum(
        index.term_doc_weight(term, doc_id)
        * concept_doc_weight(store, index, concept_id, doc_id)
        for doc_id in store.docs_for(concept_id)
    )
