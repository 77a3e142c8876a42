"""Tokenizer configuration and the single dispatch point used by indexing and search."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from ..errors import ConfigError
from .analyzer import analyze
from .normalize import basic_normalize
from .wordpiece import WordPieceVocab, wordpiece_segment


class Mechanism(str, Enum):
    WHITESPACE = "whitespace"
    ANALYZER = "analyzer"
    WORDPIECE = "wordpiece"


@dataclass(frozen=True)
class TokenizerConfig:
    mechanism: Mechanism
    vocab: Optional[WordPieceVocab] = None
    lowercase: bool = True
    drop_unknown: bool = True
    stopword_list: Optional[frozenset] = None
    # Whitespace ablation only: fold case before splitting.
    casefold: bool = False

    def __post_init__(self):
        try:
            mech = Mechanism(self.mechanism)
        except ValueError:
            raise ConfigError(f"unknown tokenizer mechanism {self.mechanism!r}") from None
        object.__setattr__(self, "mechanism", mech)
        if mech is Mechanism.WORDPIECE and self.vocab is None:
            raise ConfigError("wordpiece tokenizer requires a vocabulary")
        if mech is Mechanism.ANALYZER:
            if self.stopword_list is None:
                raise ConfigError("analyzer tokenizer requires a stopword list (may be empty)")
            object.__setattr__(self, "stopword_list", frozenset(self.stopword_list))

    @property
    def fingerprint(self) -> str:
        """Human-readable identity of everything that affects emitted tokens."""
        mech = self.mechanism
        if mech is Mechanism.WHITESPACE:
            return "whitespace:fold" if self.casefold else "whitespace"
        if mech is Mechanism.ANALYZER:
            blob = "\n".join(sorted(self.stopword_list)).encode("utf-8")
            return f"analyzer:porter:stop={hashlib.sha256(blob).hexdigest()[:16]}"
        parts = [
            "wordpiece",
            f"vocab={self.vocab.digest()[:16]}",
            "lower" if self.lowercase else "cased",
            "drop-unk" if self.drop_unknown else "keep-unk",
        ]
        return ":".join(parts)

    def describe(self) -> dict:
        """JSON-friendly summary (the vocabulary itself is referenced by digest only)."""
        d = {"mechanism": self.mechanism.value, "fingerprint": self.fingerprint}
        if self.mechanism is Mechanism.WHITESPACE:
            d["casefold"] = self.casefold
        elif self.mechanism is Mechanism.ANALYZER:
            d["stopwords"] = sorted(self.stopword_list)
        else:
            d.update(
                vocab_sha256=self.vocab.digest(),
                vocab_size=len(self.vocab),
                lowercase=self.lowercase,
                drop_unknown=self.drop_unknown,
            )
        return d


def whitespace_tokenize(text: str) -> list[str]:
    return text.split()


def wordpiece_tokenize(text: str, config: TokenizerConfig) -> list[str]:
    vocab = config.vocab
    out: list[str] = []
    for word in basic_normalize(text, lowercase=config.lowercase):
        out.extend(wordpiece_segment(word, vocab))
    if config.drop_unknown:
        out = [t for t in out if t != vocab.unk_token]
    return out


def analyzer_tokenize(text: str, config: TokenizerConfig) -> list[str]:
    return analyze(text, config.stopword_list)


def tokenize(text: str, config: TokenizerConfig) -> list[str]:
    mech = config.mechanism
    if mech is Mechanism.WHITESPACE:
        return whitespace_tokenize(text.casefold() if config.casefold else text)
    if mech is Mechanism.ANALYZER:
        return analyzer_tokenize(text, config)
    return wordpiece_tokenize(text, config)
