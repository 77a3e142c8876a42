"""
Index, search, fuse and evaluate
================================

A small collection is indexed once per tokenizer. The analyzer run and the
WordPiece run are then fused and every run is scored with MRR@10.
"""

import random

from subword_retrieval.corpus_io import Document, Qrels, Query
from subword_retrieval.evaluate import evaluate_run
from subword_retrieval.fusion import FusionParams, fuse
from subword_retrieval.index import build_index
from subword_retrieval.retrieval import run_queries
from subword_retrieval.tokenize import TokenizerConfig, english_stopwords
from subword_retrieval.tokenize.trainer import train_wordpiece

rng = random.Random(0)
stems = ["fish", "boat", "river", "bridge", "market", "teach", "sing", "climb"]
suffixes = ["", "s", "ing", "er", "ers", "ed"]
docs = [Document(f"d{i}", "", " ".join(rng.choice(stems) + rng.choice(suffixes) for _ in range(12)))
        for i in range(200)]


def stem_of(word):
    return next(s for s in stems if word.startswith(s))


# each query paraphrases one document with different inflections
queries, judgments = [], {}
for j in range(30):
    target = rng.choice(docs)
    picked = rng.sample(target.body.split(), 3)
    queries.append(Query(f"q{j}", " ".join(stem_of(w) + rng.choice(suffixes) for w in picked)))
    judgments[f"q{j}"] = {target.doc_id: 1}
qrels = Qrels(judgments)

###############################################################################
# One index and one run per tokenizer.

configs = {
    "whitespace": TokenizerConfig("whitespace"),
    "analyzer": TokenizerConfig("analyzer", stopword_list=english_stopwords()),
    "wordpiece": TokenizerConfig("wordpiece", vocab=train_wordpiece(docs, vocab_size=80)),
}
runs = {}
for name, cfg in configs.items():
    index = build_index(docs, cfg)
    runs[name] = run_queries(index, queries, cfg, k=10, run_tag=name)

runs["analyzer+wordpiece"] = fuse(runs["analyzer"], runs["wordpiece"], FusionParams(alpha=0.5, k=10))

for name, run in runs.items():
    rep = evaluate_run(run, qrels, k=10)
    print(f"{name:<20} MRR@10={rep.mrr_at_k:.3f}  Recall@10={rep.recall_at_k:.3f}")
