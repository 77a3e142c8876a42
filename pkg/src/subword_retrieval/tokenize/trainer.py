"""Unsupervised WordPiece vocabulary training.

Words start as a first character followed by continuation characters
(``##x``). Each step merges the adjacent symbol pair with the highest
likelihood score ``freq(ab) / (freq(a) * freq(b))`` among pairs occurring at
least ``min_pair_freq`` times. Ties go to the more frequent pair, then to
the lexicographically smallest merged string.

Pair and symbol counts are maintained incrementally. A heap of candidate
pairs is kept with lazy invalidation: every entry records the counts it was
scored with, and whenever a count changes a fresh entry is pushed for each
pair that count feeds into.
"""

from __future__ import annotations

import heapq
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from ..corpus_io import Document
from ..errors import ConfigError
from .normalize import basic_normalize
from .wordpiece import CONTINUATION_PREFIX, UNK_TOKEN, WordPieceVocab

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Merge:
    left: str
    right: str
    merged: str
    score: float
    pair_freq: int


def pair_score(pair_freq: int, left_freq: int, right_freq: int) -> float:
    return pair_freq / (left_freq * right_freq)


def merge_symbols(left: str, right: str, prefix: str = CONTINUATION_PREFIX) -> str:
    if right.startswith(prefix):
        right = right[len(prefix):]
    return left + right


def initial_alphabet(words: Iterable[str], prefix: str = CONTINUATION_PREFIX) -> tuple[list[str], list[str]]:
    """Bare form of every character seen, continuation form of every non-initial character."""
    bare: set[str] = set()
    cont: set[str] = set()
    for w in words:
        bare.update(w)
        cont.update(w[1:])
    return sorted(bare), sorted(prefix + c for c in cont)


class WordPieceTrainer:
    """Step-wise trainer; ``step()`` performs one merge and returns it."""

    def __init__(self, word_counts: Mapping[str, int], min_pair_freq: int = 2,
                 unk_token: str = UNK_TOKEN, continuation_prefix: str = CONTINUATION_PREFIX):
        if min_pair_freq < 1:
            raise ConfigError("min_pair_freq must be >= 1")
        word_counts = {w: c for w, c in word_counts.items() if w and c > 0}
        if not word_counts:
            raise ConfigError("cannot train a vocabulary on an empty corpus")
        self.min_pair_freq = min_pair_freq
        self.unk_token = unk_token
        self.prefix = continuation_prefix

        ordered = sorted(word_counts)
        bare, cont = initial_alphabet(ordered, continuation_prefix)
        self.vocab: list[str] = [unk_token] + bare + cont
        self._in_vocab = set(self.vocab)
        self.alphabet_size = len(self.vocab)
        self.merges: list[Merge] = []

        self.words: list[list[str]] = [[w[0]] + [continuation_prefix + c for c in w[1:]] for w in ordered]
        self.counts: list[int] = [word_counts[w] for w in ordered]

        self.symbol_freq: Counter = Counter()
        self.pair_freq: dict[tuple[str, str], int] = defaultdict(int)
        self.pair_words: dict[tuple[str, str], set[int]] = defaultdict(set)
        self.symbol_pairs: dict[str, set[tuple[str, str]]] = defaultdict(set)
        for idx, (syms, cnt) in enumerate(zip(self.words, self.counts)):
            self._add_word(idx, syms, cnt)

        self._heap: list = []
        for pair in self.pair_freq:
            self._push(pair)

    # -- bookkeeping ------------------------------------------------------

    def _add_word(self, idx, syms, cnt, changed_pairs=None, sym_delta=None):
        for s in syms:
            self.symbol_freq[s] += cnt
            if sym_delta is not None:
                sym_delta[s] += cnt
        for pair in zip(syms, syms[1:]):
            if self.pair_freq.get(pair, 0) == 0:
                self.symbol_pairs[pair[0]].add(pair)
                self.symbol_pairs[pair[1]].add(pair)
            self.pair_freq[pair] += cnt
            self.pair_words[pair].add(idx)
            if changed_pairs is not None:
                changed_pairs.add(pair)

    def _remove_word(self, idx, syms, cnt, changed_pairs, sym_delta):
        for s in syms:
            self.symbol_freq[s] -= cnt
            sym_delta[s] -= cnt
        for pair in zip(syms, syms[1:]):
            self.pair_freq[pair] -= cnt
            self.pair_words[pair].discard(idx)
            changed_pairs.add(pair)

    def _push(self, pair):
        pf = self.pair_freq.get(pair, 0)
        if pf < self.min_pair_freq:
            return
        a, b = pair
        fa, fb = self.symbol_freq[a], self.symbol_freq[b]
        score = pair_score(pf, fa, fb)
        heapq.heappush(self._heap, (-score, -pf, merge_symbols(a, b, self.prefix), a, b, pf, fa, fb))

    def _pop_best(self):
        heap = self._heap
        while heap:
            neg_score, _, merged, a, b, pf, fa, fb = heapq.heappop(heap)
            if (self.pair_freq.get((a, b), 0) == pf and self.symbol_freq[a] == fa
                    and self.symbol_freq[b] == fb):
                return Merge(a, b, merged, -neg_score, pf)
        return None

    # -- public -----------------------------------------------------------

    def best_merge(self) -> Optional[Merge]:
        """Peek at the next merge without applying it."""
        m = self._pop_best()
        if m is not None:
            self._push((m.left, m.right))
        return m

    def segmentation(self) -> list[tuple[tuple[str, ...], int]]:
        return [(tuple(s), c) for s, c in zip(self.words, self.counts)]

    def step(self) -> Optional[Merge]:
        """Apply the best qualifying merge; None when no pair qualifies."""
        m = self._pop_best()
        if m is None:
            return None
        a, b, merged = m.left, m.right, m.merged
        changed_pairs: set = set()
        sym_delta: Counter = Counter()
        for idx in sorted(self.pair_words[(a, b)]):
            old = self.words[idx]
            cnt = self.counts[idx]
            new = []
            i = 0
            while i < len(old):
                if i + 1 < len(old) and old[i] == a and old[i + 1] == b:
                    new.append(merged)
                    i += 2
                else:
                    new.append(old[i])
                    i += 1
            self._remove_word(idx, old, cnt, changed_pairs, sym_delta)
            self._add_word(idx, new, cnt, changed_pairs, sym_delta)
            self.words[idx] = new

        for pair in list(changed_pairs):
            if self.pair_freq.get(pair, 0) <= 0:
                self.pair_freq.pop(pair, None)
                self.pair_words.pop(pair, None)
                self.symbol_pairs[pair[0]].discard(pair)
                self.symbol_pairs[pair[1]].discard(pair)
                changed_pairs.discard(pair)
        for s, d in sym_delta.items():
            if d == 0:
                continue
            if self.symbol_freq[s] == 0:
                del self.symbol_freq[s]
            changed_pairs.update(self.symbol_pairs.get(s, ()))
        for pair in changed_pairs:
            self._push(pair)

        if merged not in self._in_vocab:
            self._in_vocab.add(merged)
            self.vocab.append(merged)
        self.merges.append(m)
        return m

    def train(self, vocab_size: int) -> WordPieceVocab:
        if vocab_size < self.alphabet_size:
            raise ConfigError(
                f"vocab_size {vocab_size} is below the forced alphabet; minimum is {self.alphabet_size}"
            )
        while len(self.vocab) < vocab_size:
            if self.step() is None:
                break
            if len(self.merges) % 1000 == 0:
                log.info("%d merges, vocabulary size %d", len(self.merges), len(self.vocab))
        return WordPieceVocab(tuple(self.vocab), self.unk_token, self.prefix)


def count_words(corpus: Iterable[Document], lowercase: bool = True, include_title: bool = True) -> Counter:
    counts: Counter = Counter()
    for doc in corpus:
        counts.update(basic_normalize(doc.indexed_text(include_title), lowercase=lowercase))
    return counts


def train_wordpiece(corpus: Iterable[Document], vocab_size: int, min_pair_freq: int = 2,
                    lowercase: bool = True, include_title: bool = True) -> WordPieceVocab:
    """Train a WordPiece vocabulary of at most ``vocab_size`` entries from raw documents."""
    trainer = WordPieceTrainer(count_words(corpus, lowercase, include_title), min_pair_freq)
    return trainer.train(vocab_size)
