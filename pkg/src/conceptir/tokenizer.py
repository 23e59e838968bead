"""Tokenization shared by the index, the knowledge base, and the annotator."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

TOKEN_RE = re.compile(r"[a-z0-9]+")

# Small built-in English stopword list; replaceable via a stopword file.
DEFAULT_STOPWORDS = frozenset(
    """
    a an and are as at be but by for from has have he her his if in into is it
    its of on or our she so that the their them they this to was were will with
    """.split()
)


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Read a stopword file: one term per line, blank lines ignored."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.strip().lower()
            if word:
                words.add(word)
    return frozenset(words)


def _s_stem(token: str) -> str:
    # Harman "S" stemmer: only strips common plural endings.
    if token.endswith("ies") and not token.endswith(("eies", "aies")):
        return token[:-3] + "y"
    if token.endswith("es") and not token.endswith(("aes", "ees", "oes")):
        return token[:-1]
    if token.endswith("s") and not token.endswith(("us", "ss")):
        return token[:-1]
    return token


@dataclass(frozen=True)
class Tokenizer:
    """Lowercase, split on non-alphanumerics, drop stopwords.

    Stemming is off by default; when enabled a plural-stripping stemmer is
    applied after stopword removal.
    """

    stopwords: frozenset[str] = field(default=DEFAULT_STOPWORDS)
    stem: bool = False

    def __call__(self, text: str) -> list[str]:
        tokens = [t for t in TOKEN_RE.findall(text.lower()) if t not in self.stopwords]
        if self.stem:
            tokens = [_s_stem(t) for t in tokens]
        return tokens
