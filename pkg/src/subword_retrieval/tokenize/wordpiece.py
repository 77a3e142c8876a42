"""WordPiece vocabulary and greedy longest-match-first segmentation."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from ..errors import ConfigError, DuplicateIdError, FormatError

UNK_TOKEN = "[UNK]"
CONTINUATION_PREFIX = "##"
MAX_WORD_CHARS = 100


@dataclass(frozen=True)
class WordPieceVocab:
    """Ordered subword vocabulary; an entry's position is its integer id."""

    entries: tuple[str, ...]
    unk_token: str = UNK_TOKEN
    continuation_prefix: str = CONTINUATION_PREFIX
    max_word_chars: int = MAX_WORD_CHARS
    _ids: dict = field(init=False, repr=False, compare=False)
    _longest: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        entries = tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        ids: dict[str, int] = {}
        for i, tok in enumerate(entries):
            if tok in ids:
                raise ConfigError(f"duplicate vocabulary entry {tok!r} (ids {ids[tok]} and {i})")
            ids[tok] = i
        if self.unk_token not in ids:
            raise ConfigError(f"unknown token {self.unk_token!r} missing from vocabulary")
        if self.continuation_prefix in ids:
            raise ConfigError(f"bare continuation prefix {self.continuation_prefix!r} is not a valid entry")
        if self.max_word_chars < 1:
            raise ConfigError("max_word_chars must be positive")
        object.__setattr__(self, "_ids", ids)
        object.__setattr__(self, "_longest", max((len(t) for t in entries), default=0))

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, token: str) -> bool:
        return token in self._ids

    def token_id(self, token: str) -> int:
        return self._ids.get(token, self._ids[self.unk_token])

    @property
    def longest_entry(self) -> int:
        return self._longest

    def digest(self) -> str:
        """SHA-256 over the entries and conventions; identifies the vocabulary in fingerprints."""
        h = hashlib.sha256()
        header = f"{self.unk_token}\x00{self.continuation_prefix}\x00{self.max_word_chars}\x00"
        h.update(header.encode("utf-8"))
        for tok in self.entries:
            h.update(tok.encode("utf-8"))
            h.update(b"\n")
        return h.hexdigest()


def wordpiece_segment(word: str, vocab: WordPieceVocab) -> list[str]:
    """Greedy longest-match-first segmentation of a single normalized word.

    Non-initial pieces carry the continuation prefix. If some offset has no
    matching entry, or the word is longer than ``vocab.max_word_chars``, the
    whole word becomes ``[vocab.unk_token]``.
    """
    n = len(word)
    if n > vocab.max_word_chars:
        return [vocab.unk_token]
    prefix = vocab.continuation_prefix
    longest = vocab.longest_entry
    pieces = []
    start = 0
    while start < n:
        end = min(n, start + longest)
        match = None
        while end > start:
            piece = word[start:end]
            if start > 0:
                piece = prefix + piece
            if piece in vocab:
                match = piece
                break
            end -= 1
        if match is None:
            return [vocab.unk_token]
        pieces.append(match)
        start = end
    return pieces


def load_vocab(path, unk_token: str = UNK_TOKEN, continuation_prefix: str = CONTINUATION_PREFIX,
               max_word_chars: int = MAX_WORD_CHARS) -> WordPieceVocab:
    """Read a BERT-style vocab file: one token per line, 0-based line index = id."""
    entries: list[str] = []
    first_seen: dict[str, int] = {}
    with open(path, "rb") as fh:
        for idx, raw in enumerate(fh):
            try:
                tok = raw.decode("utf-8").rstrip("\r\n")
            except UnicodeDecodeError:
                raise FormatError("invalid UTF-8", path, idx + 1) from None
            if tok in first_seen:
                raise DuplicateIdError(
                    tok, path, idx + 1,
                    kind=f"vocabulary entry (lines {first_seen[tok] + 1} and {idx + 1})",
                )
            first_seen[tok] = idx
            entries.append(tok)
    try:
        return WordPieceVocab(tuple(entries), unk_token, continuation_prefix, max_word_chars)
    except ConfigError as exc:
        raise FormatError(str(exc), path) from None


def save_vocab(vocab: WordPieceVocab, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for tok in vocab.entries:
            fh.write(tok + "\n")
