"""
Does subword retrieval improve with more pretraining text?
==========================================================

Per-language MRR values are normalized by a reference system and then
correlated with the log of each language's article count. The numbers
below are made up for illustration.
"""

import numpy as np

from subword_retrieval.evaluate import LanguageStats, normalize_scores, reference_tags, size_correlation

stats = [
    LanguageStats("aa", 20_000, {"analyzer": 0.40, "wordpiece": 0.22}),
    LanguageStats("bb", 150_000, {"analyzer": 0.45, "wordpiece": 0.31}),
    LanguageStats("cc", 900_000, {"analyzer": 0.38, "wordpiece": 0.33}),
    LanguageStats("dd", 5_000_000, {"analyzer": 0.50, "wordpiece": 0.49}),
    # no analyzer for this one, so whitespace becomes its reference
    LanguageStats("ee", 60_000, {"whitespace": 0.30, "wordpiece": 0.36}),
]

refs = reference_tags(stats)
for lang, row in normalize_scores(stats, refs).items():
    print(lang, refs[lang], {k: round(v, 3) for k, v in row.items()})

###############################################################################
# Languages without an analyzer reference are left out of the correlation.

corr = size_correlation(stats, system="wordpiece")
print("languages:", corr.languages)
print("ln(articles):", np.round(corr.log_sizes, 2))
print("normalized MRR:", np.round(corr.normalized, 3))
print(f"Pearson r = {corr.r:.3f}")
