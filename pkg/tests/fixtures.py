"""Synthetic fixtures: a planted-topic corpus where concept feedback must help.

Each topic has 10 relevant docs and 10 distractors. Distractors repeat the
query terms (so they win the baseline BM25) but carry none of the topic's
expansion vocabulary. Relevant docs mention the topic concept's title phrase
and its expansion terms, so concept feedback can lift them.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field


@dataclass
class PlantedFixture:
    corpus: list[dict] = field(default_factory=list)
    kb: list[dict] = field(default_factory=list)
    topics: dict[str, str] = field(default_factory=dict)          # query_id -> text
    doc_qrels: dict[str, dict[str, int]] = field(default_factory=dict)
    concept_qrels: dict[str, dict[str, int]] = field(default_factory=dict)

    def write(self, directory) -> dict[str, str]:
        paths = {}
        directory.mkdir(parents=True, exist_ok=True)
        for name, records in (("corpus", self.corpus), ("kb", self.kb)):
            path = directory / f"{name}.jsonl"
            path.write_text("".join(json.dumps(r) + "\n" for r in records), encoding="utf-8")
            paths[name] = str(path)
        topics_path = directory / "topics.jsonl"
        topics_path.write_text(
            "".join(
                json.dumps({"query_id": qid, "text": text}) + "\n"
                for qid, text in self.topics.items()
            ),
            encoding="utf-8",
        )
        paths["topics"] = str(topics_path)
        for name, qrels in (("qrels", self.doc_qrels), ("concept_qrels", self.concept_qrels)):
            path = directory / f"{name}.txt"
            path.write_text(
                "".join(
                    f"{qid} 0 {item} {rel}\n"
                    for qid, items in qrels.items()
                    for item, rel in sorted(items.items())
                ),
                encoding="utf-8",
            )
            paths[name] = str(path)
        return paths


def make_planted(num_topics: int = 10, docs_per_topic: int = 20, seed: int = 7) -> PlantedFixture:
    rng = random.Random(seed)
    fx = PlantedFixture()
    fillers = [f"filler{i}" for i in range(30)]

    for i in range(num_topics):
        qid = f"t{i:02d}"
        qa, qb = f"query{i}a", f"query{i}b"
        exp = [f"exp{i}{j}" for j in range(6)]
        dec = [f"dec{i}{j}" for j in range(4)]
        fx.topics[qid] = f"{qa} {qb}"

        concept_id = f"c{i:02d}rel"
        decoy_id = f"c{i:02d}dec"
        fx.kb.append(
            {
                "concept_id": concept_id,
                "title": f"{qa} {qb}",
                "article_text": " ".join(exp * 3 + [qa, qb] * 2 + rng.sample(fillers, 3)),
                "anchors": [
                    {"text": f"{qa} {qb}", "count": 3},
                    {"text": " ".join(exp[:3]), "count": 2},
                ],
                "url": f"https://example.org/wiki/{concept_id}",
            }
        )
        fx.kb.append(
            {
                "concept_id": decoy_id,
                "title": f"{dec[0]} {dec[1]}",
                "article_text": " ".join(dec * 4 + rng.sample(fillers, 3)),
                "anchors": [{"text": f"{dec[0]} {dec[1]}", "count": 2}],
                "url": f"https://example.org/wiki/{decoy_id}",
            }
        )
        fx.concept_qrels[qid] = {concept_id: 1, decoy_id: 0}

        half = docs_per_topic // 2
        for j in range(half):  # relevant: concept phrase + expansion vocabulary
            words = [qa, qb]  # one adjacent occurrence of the concept title
            words += rng.sample(exp, 4) * 2
            words += rng.sample(fillers, 6)
            rng.shuffle(words)
            # keep one guaranteed adjacent title occurrence at the front
            body = f"{qa} {qb} " + " ".join(w for w in words if w not in (qa, qb))
            doc_id = f"d{i:02d}r{j:02d}"
            fx.corpus.append({"doc_id": doc_id, "title": f"report {i}-{j}", "body": body})
            fx.doc_qrels.setdefault(qid, {})[doc_id] = 1
        for j in range(docs_per_topic - half):  # distractors: heavy query tf, decoy concept
            words = []
            for _ in range(4):  # query terms never adjacent, so no title match
                words += [qa, rng.choice(fillers), qb, rng.choice(fillers)]
            words += [f"{dec[0]} {dec[1]}"] * 2
            words += rng.sample(dec, 2)
            words += rng.sample(fillers, 4)
            doc_id = f"d{i:02d}x{j:02d}"
            fx.corpus.append(
                {"doc_id": doc_id, "title": f"bulletin {i}-{j}", "body": " ".join(words)}
            )
            fx.doc_qrels.setdefault(qid, {})[doc_id] = 0
    return fx
