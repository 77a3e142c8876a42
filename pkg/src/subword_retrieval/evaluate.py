"""MRR@k, Recall@k, normalized effectiveness and the corpus-size correlation."""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .corpus_io import Qrels
from .errors import ConfigError, ContractViolation, FormatError
from .retrieval import RunFile

log = logging.getLogger(__name__)


class EvalWarning(UserWarning):
    pass


@dataclass
class EvalReport:
    """Per-query reciprocal rank and recall plus their means.

    Evaluated queries are those with at least one relevant judgment; a
    judged query absent from the run scores 0 on both metrics. Run queries
    with no judgments at all, and judged queries without any relevant
    document, are excluded and counted.
    """

    k: int
    rel_threshold: int
    reciprocal_rank: dict[str, float] = field(default_factory=dict)
    recall: dict[str, float] = field(default_factory=dict)
    n_no_relevant: int = 0
    n_unjudged: int = 0

    @property
    def num_queries(self) -> int:
        return len(self.reciprocal_rank)

    @property
    def mrr_at_k(self) -> float:
        return float(np.mean(list(self.reciprocal_rank.values()))) if self.reciprocal_rank else 0.0

    @property
    def recall_at_k(self) -> float:
        return float(np.mean(list(self.recall.values()))) if self.recall else 0.0

    def metric(self, name: str) -> tuple[dict[str, float], float]:
        if name == "mrr":
            return self.reciprocal_rank, self.mrr_at_k
        if name == "recall":
            return self.recall, self.recall_at_k
        raise ConfigError(f"unknown metric {name!r}")

    def to_tsv(self, metric: str) -> str:
        """trec_eval-style rows: ``metric<TAB>qid<TAB>value`` then the ``ALL`` row."""
        per_query, agg = self.metric(metric)
        label = f"{metric}@{self.k}"
        rows = [f"{label}\t{q}\t{v:.4f}\n" for q, v in per_query.items()]
        rows.append(f"num_q\tALL\t{self.num_queries}\n")
        rows.append(f"{label}\tALL\t{agg:.4f}\n")
        return "".join(rows)


def evaluate_run(run: RunFile, qrels: Qrels, k: int = 100, rel_threshold: int = 1) -> EvalReport:
    if k < 1:
        raise ConfigError("k must be >= 1")
    report = EvalReport(k=k, rel_threshold=rel_threshold)
    unjudged = [q for q in run.results if q not in qrels.judgments]
    if unjudged:
        report.n_unjudged = len(unjudged)
        warnings.warn(f"{len(unjudged)} run queries have no judgments and are excluded", EvalWarning,
                      stacklevel=2)
    for qid in qrels.judgments:
        relevant = qrels.relevant(qid, rel_threshold)
        if not relevant:
            report.n_no_relevant += 1
            continue
        top = run.results.get(qid, [])[:k]
        rr = 0.0
        found = 0
        for pos, hit in enumerate(top, start=1):
            if hit.doc_id in relevant:
                if rr == 0.0:
                    rr = 1.0 / pos
                found += 1
        report.reciprocal_rank[qid] = rr
        report.recall[qid] = found / len(relevant)
    return report


def mrr_at_k(run: RunFile, qrels: Qrels, k: int = 100, rel_threshold: int = 1) -> EvalReport:
    return evaluate_run(run, qrels, k, rel_threshold)


def recall_at_k(run: RunFile, qrels: Qrels, k: int = 100, rel_threshold: int = 1) -> EvalReport:
    return evaluate_run(run, qrels, k, rel_threshold)


# -- cross-language analysis ----------------------------------------------


@dataclass
class LanguageStats:
    language: str
    wiki_article_count: int
    scores: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.wiki_article_count <= 0:
            raise ConfigError(f"{self.language}: article count must be positive")


def load_language_stats(path) -> list[LanguageStats]:
    """Read ``language<TAB>article_count<TAB>system_tag<TAB>mrr`` rows (``#`` comments allowed)."""
    by_lang: dict[str, LanguageStats] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise FormatError(f"expected 4 tab-separated columns, got {len(parts)}", path, line_no)
            lang, count_s, tag, mrr_s = parts
            try:
                count, mrr = int(count_s), float(mrr_s)
            except ValueError:
                raise FormatError("bad article count or score", path, line_no) from None
            st = by_lang.get(lang)
            if st is None:
                try:
                    st = by_lang[lang] = LanguageStats(lang, count)
                except ConfigError as exc:
                    raise FormatError(str(exc), path, line_no) from None
            elif st.wiki_article_count != count:
                raise FormatError(f"{lang}: conflicting article counts", path, line_no)
            st.scores[tag] = mrr
    return list(by_lang.values())


def reference_tags(stats: Sequence[LanguageStats], preferred: str = "analyzer",
                   fallback: str = "whitespace") -> dict[str, str]:
    """Analyzer score is the reference where a language has one, whitespace otherwise."""
    return {s.language: preferred if preferred in s.scores else fallback for s in stats}


def normalize_scores(stats: Sequence[LanguageStats],
                     reference_tag_per_language: Mapping[str, str]) -> dict[str, dict[str, float]]:
    """Divide every system's score by the language's reference score (reference -> 1.0)."""
    table: dict[str, dict[str, float]] = {}
    for st in stats:
        ref = reference_tag_per_language.get(st.language)
        if ref is None:
            raise ConfigError(f"no reference system given for language {st.language!r}")
        denom = st.scores.get(ref)
        if denom is None or not denom > 0:
            raise ConfigError(f"language {st.language!r}: reference score for {ref!r} is missing or zero")
        table[st.language] = {tag: (1.0 if tag == ref else v / denom) for tag, v in st.scores.items()}
    return table


def pearson_r(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Sample Pearson correlation coefficient, clipped to [-1, 1]."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ContractViolation("pearson_r needs two 1-d sequences of equal length")
    if x.size < 2:
        raise ContractViolation("pearson_r needs at least two points")
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise ContractViolation("correlation is undefined for a constant input")
    dx = x - x.mean()
    dy = y - y.mean()
    r = float(np.dot(dx, dy) / math.sqrt(float(np.dot(dx, dx)) * float(np.dot(dy, dy))))
    return max(-1.0, min(1.0, r))


@dataclass
class CorrelationResult:
    languages: list[str]
    log_sizes: list[float]
    normalized: list[float]
    r: float


def size_correlation(stats: Sequence[LanguageStats], system: str = "wordpiece",
                     preferred: str = "analyzer", fallback: str = "whitespace") -> CorrelationResult:
    """Correlate ln(article count) with the system's normalized score.

    Only languages normalized against ``preferred`` take part; languages that
    fell back to the whitespace reference are left out.
    """
    refs = reference_tags(stats, preferred, fallback)
    table = normalize_scores(stats, refs)
    langs, xs, ys = [], [], []
    for st in stats:
        if refs[st.language] != preferred or system not in st.scores:
            continue
        langs.append(st.language)
        xs.append(math.log(st.wiki_article_count))
        ys.append(table[st.language][system])
    return CorrelationResult(langs, xs, ys, pearson_r(xs, ys))
