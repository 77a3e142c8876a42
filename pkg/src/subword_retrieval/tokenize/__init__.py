"""Whitespace, rule-based analyzer and WordPiece tokenization."""

from .analyzer import english_stopwords, read_stopwords
from .config import (
    Mechanism,
    TokenizerConfig,
    analyzer_tokenize,
    tokenize,
    whitespace_tokenize,
    wordpiece_tokenize,
)
from .normalize import basic_normalize
from .porter import porter_stem
from .trainer import Merge, WordPieceTrainer, train_wordpiece
from .wordpiece import WordPieceVocab, load_vocab, save_vocab, wordpiece_segment

__all__ = [
    "Mechanism",
    "Merge",
    "TokenizerConfig",
    "WordPieceTrainer",
    "WordPieceVocab",
    "analyzer_tokenize",
    "basic_normalize",
    "english_stopwords",
    "load_vocab",
    "porter_stem",
    "read_stopwords",
    "save_vocab",
    "tokenize",
    "train_wordpiece",
    "whitespace_tokenize",
    "wordpiece_segment",
    "wordpiece_tokenize",
]
