"""Rule-based English analyzer: word-boundary split, lowercase, stopwords, Porter."""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources

from .porter import porter_stem

# Letter/digit runs: \w minus the underscore.
_WORD_RE = re.compile(r"[^\W_]+")


def read_stopwords(path) -> frozenset[str]:
    """One word per line; blank lines and ``#`` comments ignored."""
    with open(path, encoding="utf-8") as fh:
        return _parse_stopwords(fh.read())


def _parse_stopwords(text: str) -> frozenset[str]:
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.lower())
    return frozenset(words)


@lru_cache(maxsize=1)
def english_stopwords() -> frozenset[str]:
    """The bundled 33-word English list."""
    text = resources.files(__package__).joinpath("data/english_stopwords.txt").read_text(encoding="utf-8")
    return _parse_stopwords(text)


def analyze(text: str, stopwords: frozenset[str]) -> list[str]:
    out = []
    for match in _WORD_RE.finditer(text):
        word = match.group().lower()
        if word in stopwords:
            continue
        out.append(porter_stem(word))
    return out
