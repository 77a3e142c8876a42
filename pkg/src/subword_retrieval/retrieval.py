"""BM25 scoring over an :class:`InvertedIndex` and TREC run files."""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .corpus_io import Query
from .errors import ConfigError, ContractViolation, DuplicateIdError, FormatError
from .index import IndexStats, InvertedIndex
from .tokenize import TokenizerConfig, tokenize

DEFAULT_K1 = 0.9
DEFAULT_B = 0.4
DEFAULT_K = 100


@dataclass(frozen=True)
class BM25Params:
    k1: float = DEFAULT_K1
    b: float = DEFAULT_B

    def __post_init__(self):
        if not self.k1 >= 0:
            raise ConfigError(f"k1 must be >= 0, got {self.k1}")
        if not 0 <= self.b <= 1:
            raise ConfigError(f"b must lie in [0, 1], got {self.b}")


@dataclass(frozen=True)
class ScoredDoc:
    doc_id: str
    score: float
    rank: int


@dataclass
class RunFile:
    """Ranked lists per query, in query order. Queries with no hits keep an empty list."""

    results: dict[str, list[ScoredDoc]] = field(default_factory=dict)
    run_tag: str = "run"

    def __len__(self) -> int:
        return len(self.results)

    def query_ids(self) -> list[str]:
        return list(self.results)


def idf(df: int, n: int) -> float:
    return math.log(1.0 + (n - df + 0.5) / (df + 0.5))


def bm25_term_score(tf: int, df: int, dl: int, params: BM25Params, stats: IndexStats) -> float:
    """Single-term BM25 contribution ``idf * tf / (tf + k1 * (1 - b + b * dl / avgdl))``.

    There is no ``(k1 + 1)`` factor in the numerator; it is a per-query
    constant and does not change rankings.
    """
    n = stats.doc_count
    if not 1 <= df <= n:
        raise ContractViolation(f"df must lie in [1, N={n}], got {df}")
    if tf < 0 or dl < 0:
        raise ContractViolation("tf and dl must be non-negative")
    if tf == 0:
        return 0.0
    if not stats.avg_doc_len > 0:
        raise ContractViolation("avg_doc_len must be positive")
    norm = params.k1 * (1.0 - params.b + params.b * dl / stats.avg_doc_len)
    return idf(df, n) * tf / (tf + norm)


def rank_candidates(doc_ids: Sequence[str], scores: Sequence[float], k: int) -> list[ScoredDoc]:
    """Top-k by descending score, ties by ascending doc id, ranks from 1."""
    order = sorted(range(len(doc_ids)), key=lambda i: (-scores[i], doc_ids[i]))[:k]
    return [ScoredDoc(doc_ids[i], float(scores[i]), r) for r, i in enumerate(order, start=1)]


def search(index: InvertedIndex, query_text: str, config: TokenizerConfig,
           params: BM25Params = BM25Params(), k: int = DEFAULT_K) -> list[ScoredDoc]:
    """Exhaustive term-at-a-time BM25 over the postings of the query terms.

    Repeated query tokens count once per occurrence. Terms are visited in
    lexicographic order so the floating-point summation order is fixed.
    """
    index.check_fingerprint(config)
    if k < 1:
        raise ConfigError("k must be >= 1")
    qtf = Counter(tokenize(query_text, config))
    stats = index.stats
    n = stats.doc_count
    acc = np.zeros(n, dtype=np.float64)
    touched = np.zeros(n, dtype=bool)
    any_hit = False
    for term in sorted(qtf):
        pl = index.dictionary.get(term)
        if pl is None:
            continue
        ords, tfs = pl
        dl = index.doc_lengths[ords]
        norm = params.k1 * (1.0 - params.b + params.b * dl / stats.avg_doc_len)
        tf = tfs.astype(np.float64)
        acc[ords] += qtf[term] * (idf(pl.df, n) * tf / (tf + norm))
        touched[ords] = True
        any_hit = True
    if not any_hit:
        return []
    cand = np.flatnonzero(touched)
    scores = acc[cand]
    if cand.size > k:
        # keep everything tied with the k-th best so the doc-id tie-break stays exact
        kth = np.partition(scores, cand.size - k)[cand.size - k]
        keep = scores >= kth
        cand, scores = cand[keep], scores[keep]
    ids = [index.doc_ids[i] for i in cand]
    return rank_candidates(ids, scores.tolist(), k)


def run_queries(index: InvertedIndex, queries: Sequence[Query], config: TokenizerConfig,
                params: BM25Params = BM25Params(), k: int = DEFAULT_K, run_tag: str = "bm25",
                threads: int = 1) -> RunFile:
    index.check_fingerprint(config)
    texts = [q.text for q in queries]
    if threads > 1 and len(queries) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            lists = list(ex.map(lambda t: search(index, t, config, params, k), texts))
    else:
        lists = [search(index, t, config, params, k) for t in texts]
    return RunFile({q.query_id: hits for q, hits in zip(queries, lists)}, run_tag)


# -- TREC run interchange -------------------------------------------------


def format_run(run: RunFile) -> str:
    lines = []
    for qid, hits in run.results.items():
        for h in hits:
            lines.append(f"{qid} Q0 {h.doc_id} {h.rank} {h.score:.6f} {run.run_tag}\n")
    return "".join(lines)


def write_run(run: RunFile, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_run(run))


def read_run(path) -> RunFile:
    """Parse ``qid Q0 docid rank score tag`` lines; entries are ordered by their rank column."""
    results: dict[str, list[ScoredDoc]] = {}
    seen: dict[str, set[str]] = {}
    tag = None
    with open(path, "rb") as fh:
        for line_no, raw in enumerate(fh, start=1):
            try:
                parts = raw.decode("utf-8").split()
            except UnicodeDecodeError:
                raise FormatError("invalid UTF-8", path, line_no) from None
            if not parts:
                continue
            if len(parts) != 6:
                raise FormatError(f"expected 6 columns, got {len(parts)}", path, line_no)
            qid, _, doc_id, rank_s, score_s, run_tag = parts
            try:
                rank, score = int(rank_s), float(score_s)
            except ValueError:
                raise FormatError("bad rank or score", path, line_no) from None
            if doc_id in seen.setdefault(qid, set()):
                raise DuplicateIdError(doc_id, path, line_no, kind=f"document in query {qid}")
            seen[qid].add(doc_id)
            results.setdefault(qid, []).append(ScoredDoc(doc_id, score, rank))
            tag = tag or run_tag
    for qid in results:
        results[qid].sort(key=lambda h: h.rank)
    return RunFile(results, tag or "run")
