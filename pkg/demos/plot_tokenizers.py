"""
Three ways to turn text into index terms
========================================

The same sentence goes through the whitespace splitter, the English
analyzer (stopwords plus Porter stemming) and a WordPiece vocabulary.
"""

from subword_retrieval.tokenize import TokenizerConfig, WordPieceVocab, english_stopwords, tokenize

text = "The runners were running quickly across Zürich's bridges"

# whitespace keeps case and punctuation attached
print(tokenize(text, TokenizerConfig("whitespace")))

# the analyzer lowercases, drops stopwords and stems
print(tokenize(text, TokenizerConfig("analyzer", stopword_list=english_stopwords())))

###############################################################################
# A hand-written vocabulary is enough to see greedy longest-match at work.
# Pieces after the first carry the ``##`` prefix; a word with no complete
# segmentation becomes ``[UNK]``, which is dropped from the index by default.

vocab = WordPieceVocab(("[UNK]", "the", "run", "##ner", "##ners", "##ning", "were",
                        "across", "zur", "##ich", "'", "s", "bridge", "##s"))
wp = TokenizerConfig("wordpiece", vocab=vocab)
print(tokenize(text, wp))
print(tokenize(text, TokenizerConfig("wordpiece", vocab=vocab, drop_unknown=False)))

###############################################################################
# Each configuration has a fingerprint. Indexes store it and refuse queries
# tokenized differently.

for cfg in (TokenizerConfig("whitespace"), TokenizerConfig("analyzer", stopword_list=english_stopwords()), wp):
    print(cfg.fingerprint)
