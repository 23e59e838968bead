import json

import pytest

from conceptir.annotate import DictionaryAnnotator
from conceptir.engine import Engine, EngineConfig
from conceptir.index import CorpusIndex
from conceptir.kb import Concept, KnowledgeBase
from conceptir.selection import ConceptSelectionParams
from conceptir.rerank import RerankParams
from conceptir.tokenizer import Tokenizer

from fixtures import make_planted

# Hand-built instance used by the unit and equation-oracle tests:
# 4 docs, 4 concepts, a small non-stopword vocabulary.
HAND_DOCS = [
    ("d1", "Tire recycling report", "tire recycling plants process rubber tire waste"),
    ("d2", "Trade secret case", "trade secret litigation about industrial espionage"),
    ("d3", "Rubber market", "rubber demand grows while tire production slows"),
    ("d4", "Espionage news", "industrial espionage and trade secret theft in tire industry"),
]

HAND_CONCEPTS = [
    Concept(
        "c_tire_recycling",
        "Tire recycling",
        "tire recycling converts waste tire rubber into usable material",
        [("tire recycling", 4), ("recycled tires", 2)],
        "https://example.org/wiki/tire_recycling",
    ),
    Concept(
        "c_trade_secret",
        "Trade secret",
        "a trade secret is confidential business information",
        [("trade secret", 5)],
        "https://example.org/wiki/trade_secret",
    ),
    Concept(
        "c_industrial_espionage",
        "Industrial espionage",
        "industrial espionage is spying for commercial purposes",
        [("industrial espionage", 3), ("espionage", 1)],
        "https://example.org/wiki/industrial_espionage",
    ),
    Concept(
        "c_rubber",
        "Rubber",
        "rubber is an elastic material used in tire production",
        [("rubber", 2)],
        "https://example.org/wiki/rubber",
    ),
]


@pytest.fixture(scope="session")
def tokenizer():
    return Tokenizer()


@pytest.fixture()
def hand_index(tokenizer):
    index = CorpusIndex(tokenizer)
    for doc_id, title, body in HAND_DOCS:
        index.add_document(doc_id, title, body)
    return index


@pytest.fixture()
def hand_kb(tokenizer):
    kb = KnowledgeBase(tokenizer)
    for concept in HAND_CONCEPTS:
        kb.add_concept(
            Concept(concept.concept_id, concept.title, concept.article_text,
                    list(concept.anchors), concept.url)
        )
    return kb


@pytest.fixture()
def hand_annotations(hand_index, hand_kb):
    return DictionaryAnnotator(hand_kb).annotate_corpus(hand_index)


@pytest.fixture()
def hand_engine(hand_index, hand_kb, hand_annotations):
    config = EngineConfig(
        selection=ConceptSelectionParams(top_n_docs=4, slate_size=4, candidate_pool_size=10),
        rerank=RerankParams(rerank_pool=10),
    )
    return Engine(hand_index, hand_kb, hand_annotations, config)


@pytest.fixture(scope="session")
def planted():
    return make_planted()


@pytest.fixture(scope="session")
def planted_paths(planted, tmp_path_factory):
    return planted.write(tmp_path_factory.mktemp("planted"))


@pytest.fixture(scope="session")
def planted_engine(planted_paths):
    return Engine.build(planted_paths["corpus"], planted_paths["kb"])


def write_jsonl(path, records):
    path.write_text("".join(json.dumps(r) + "\n" for r in records), encoding="utf-8")
    return path
