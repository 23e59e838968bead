"""Interactive retrieval engine with concept-based relevance feedback.

A query produces a slate of knowledge-base concepts; the user marks the
relevant ones and documents are re-ranked by fusing the initial BM25 score
with five concept-derived evidence sources.
"""

__version__ = "0.1.0"
