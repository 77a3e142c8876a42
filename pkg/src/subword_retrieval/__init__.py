"""Lexical retrieval with interchangeable tokenizers (whitespace, analyzer, WordPiece)."""

__version__ = "0.1.0"
