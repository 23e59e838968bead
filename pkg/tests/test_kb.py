import json

import pytest

from conceptir.kb import Concept, KbError, KnowledgeBase
from conceptir.tokenizer import Tokenizer


def no_stop():
    return KnowledgeBase(Tokenizer(stopwords=frozenset()))


def test_load_kb_stats(tmp_path, tokenizer):
    path = tmp_path / "kb.jsonl"
    records = [
        {"concept_id": "c1", "title": "tire rubber"},
        {"concept_id": "c2", "title": "glass plant factory waste"},
    ]
    path.write_text("".join(json.dumps(r) + "\n" for r in records), encoding="utf-8")
    kb = KnowledgeBase(tokenizer)
    stats = kb.load_kb(path)
    assert stats.num_concepts == 2
    assert stats.avg_title_length == 3.0
    # no anchors anywhere: contributes nothing
    assert stats.avg_anchor_length == 0.0


def test_duplicate_concept_id(tokenizer):
    kb = KnowledgeBase(tokenizer)
    kb.add_concept(Concept("c1", "tire"))
    with pytest.raises(KbError, match="duplicate concept_id"):
        kb.add_concept(Concept("c1", "rubber"))


def test_empty_title_rejected(tokenizer):
    with pytest.raises(KbError, match="empty title"):
        KnowledgeBase(tokenizer).add_concept(Concept("c1", "  "))


def test_malformed_record_names_line(tmp_path, tokenizer):
    path = tmp_path / "kb.jsonl"
    path.write_text('{"concept_id": "c1", "title": "tire"}\n{"title": "x"}\n', encoding="utf-8")
    with pytest.raises(KbError, match="line 2"):
        KnowledgeBase(tokenizer).load_kb(path)


def test_title_term_weight_at_average_length():
    kb = no_stop()
    kb.add_concept(Concept("c1", "tire recycling"))
    kb.add_concept(Concept("c2", "rubber waste"))
    # both titles are 2 tokens, so length == avg; tf=1 -> 1/(1+0.5+1.5)
    assert kb.title_term_weight("tire", "c1") == pytest.approx(1 / 3)
    assert kb.title_term_weight("rubber", "c1") == 0.0


def test_title_symmetry_united_states():
    kb = no_stop()
    kb.add_concept(Concept("c1", "United States"))
    assert kb.title_term_weight("united", "c1") == kb.title_term_weight("states", "c1")


def test_title_weight_sum_property():
    # distinct tf=1 terms at avg length: each term contributes 1/3
    kb = no_stop()
    kb.add_concept(Concept("c1", "tire rubber glass"))
    kb.add_concept(Concept("c2", "plant waste factory"))
    total = sum(kb.title_term_weight(t, "c1") for t in ("tire", "rubber", "glass"))
    assert total == pytest.approx(3 / 3)


def test_article_term_weight():
    kb = no_stop()
    kb.add_concept(Concept("c1", "tire", "tire tire tire rubber glass"))
    kb.add_concept(Concept("c2", "rubber", "plant waste glass factory heap"))
    # tf=3, article length (5) == avg -> 3/(3+2) = 0.6
    assert kb.article_term_weight("tire", "c1") == pytest.approx(0.6)
    assert kb.article_term_weight("tire", "c2") == 0.0


def test_article_length_penalty():
    kb = no_stop()
    kb.add_concept(Concept("c1", "a1", "tire rubber"))
    kb.add_concept(Concept("c2", "a2", "tire rubber glass plant waste heap"))
    # same tf, c2's article is longer than average -> smaller weight
    assert kb.article_term_weight("tire", "c2") < kb.article_term_weight("tire", "c1")


def test_empty_article_all_zero():
    kb = no_stop()
    kb.add_concept(Concept("c1", "tire", ""))
    assert kb.article_term_weight("tire", "c1") == 0.0


def test_anchor_term_weight_two_single_token_anchors():
    kb = no_stop()
    kb.add_concept(Concept("c1", "tire", anchors=[("tyre", 1), ("tire", 2)]))
    # avg anchor length 1; each matching anchor contributes tf/(tf+0.5+1.5) = 1/3
    assert kb.anchor_term_weight("tire", "c1") == pytest.approx(1 / 3)
    assert kb.anchor_term_weight("tyre", "c1") == pytest.approx(1 / 3)
    assert kb.anchor_term_weight("rubber", "c1") == 0.0


def test_anchor_weight_no_anchors():
    kb = no_stop()
    kb.add_concept(Concept("c1", "tire"))
    assert kb.anchor_term_weight("tire", "c1") == 0.0


def test_duplicate_anchor_strings_merged():
    kb = no_stop()
    kb.add_concept(Concept("c1", "x", anchors=[("tire", 1), ("tire", 4)]))
    assert kb.concepts["c1"].anchors == [("tire", 5)]
    # Eq-style sum counts the distinct string once
    assert kb.anchor_term_weight("tire", "c1") == pytest.approx(1 / 3)


def test_unknown_concept_raises(hand_kb):
    with pytest.raises(KeyError, match="unknown concept_id"):
        hand_kb.title_term_weight("tire", "nope")


def test_weights_invariant_to_load_order():
    a, b = no_stop(), no_stop()
    concepts = [
        Concept("c1", "tire rubber", "tire waste", [("tire", 1)]),
        Concept("c2", "glass plant", "glass heap factory", [("glass plant", 2)]),
    ]
    for c in concepts:
        a.add_concept(Concept(c.concept_id, c.title, c.article_text, list(c.anchors)))
    for c in reversed(concepts):
        b.add_concept(Concept(c.concept_id, c.title, c.article_text, list(c.anchors)))
    for term in ("tire", "glass", "plant"):
        for cid in ("c1", "c2"):
            assert a.title_term_weight(term, cid) == b.title_term_weight(term, cid)
            assert a.article_term_weight(term, cid) == b.article_term_weight(term, cid)
            assert a.anchor_term_weight(term, cid) == b.anchor_term_weight(term, cid)
