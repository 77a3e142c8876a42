"""
Training a WordPiece vocabulary
===============================

The trainer starts from single characters and repeatedly merges the
adjacent pair with the highest likelihood score
``freq(ab) / (freq(a) * freq(b))``.
"""

from subword_retrieval.corpus_io import Document
from subword_retrieval.tokenize import TokenizerConfig, tokenize
from subword_retrieval.tokenize.trainer import WordPieceTrainer, count_words

docs = [Document(str(i), "", t) for i, t in enumerate([
    "hug hugs hugging hugged",
    "pug pugs bun buns",
    "hugging hugs again and again",
])]

counts = count_words(docs)
trainer = WordPieceTrainer(counts, min_pair_freq=2)
print("alphabet:", trainer.vocab)

# step through a few merges by hand
for _ in range(6):
    m = trainer.step()
    print(f"{m.left:>6} + {m.right:<6} -> {m.merged:<8} score={m.score:.4f} freq={m.pair_freq}")

###############################################################################
# ``train`` keeps merging until the vocabulary has the requested size.

vocab = trainer.train(trainer.alphabet_size + 15)
cfg = TokenizerConfig("wordpiece", vocab=vocab)
for word in ("hugging", "pugs", "bunny"):
    print(word, tokenize(word, cfg))
