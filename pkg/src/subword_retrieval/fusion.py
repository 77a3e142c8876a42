"""Weighted-sum fusion of two runs with per-query min-max normalization."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError, DuplicateIdError
from .retrieval import DEFAULT_K, RunFile, ScoredDoc, rank_candidates

DEFAULT_ALPHA = 0.5
# Fused scores are rounded before ranking so that mathematically tied
# candidates do not split on the last bits of float rounding.
_SCORE_DECIMALS = 12


@dataclass(frozen=True)
class FusionParams:
    alpha: float = DEFAULT_ALPHA
    k: int = DEFAULT_K
    normalize: bool = True

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.k < 1:
            raise ConfigError("k must be >= 1")


def _scores(hits: list[ScoredDoc], qid: str) -> dict[str, float]:
    out: dict[str, float] = {}
    for h in hits:
        if h.doc_id in out:
            raise DuplicateIdError(h.doc_id, kind=f"document in query {qid}")
        out[h.doc_id] = h.score
    return out


def minmax(scores: dict[str, float]) -> dict[str, float]:
    """Map to [0, 1]; fewer than two distinct values map everything to 1.0."""
    if not scores:
        return {}
    lo, hi = min(scores.values()), max(scores.values())
    if hi == lo:
        return {d: 1.0 for d in scores}
    span = hi - lo
    return {d: (s - lo) / span for d, s in scores.items()}


def fuse_query(hits_a: list[ScoredDoc], hits_b: list[ScoredDoc], params: FusionParams,
               qid: str = "") -> list[ScoredDoc]:
    a, b = _scores(hits_a, qid), _scores(hits_b, qid)
    if params.normalize:
        a, b = minmax(a), minmax(b)
    alpha = params.alpha
    ids = sorted(set(a) | set(b))
    fused = [round(alpha * a.get(d, 0.0) + (1.0 - alpha) * b.get(d, 0.0), _SCORE_DECIMALS) for d in ids]
    return rank_candidates(ids, fused, params.k)


def fuse(run_a: RunFile, run_b: RunFile, params: FusionParams = FusionParams()) -> RunFile:
    """Fuse two runs query by query over the union of their query ids.

    A query missing from one run is treated as an empty list there. Output
    query order is run_a's order followed by run_b-only queries.
    """
    qids = list(run_a.results)
    qids += [q for q in run_b.results if q not in run_a.results]
    tag = f"fuse({run_a.run_tag},{run_b.run_tag},{params.alpha:g})"
    results = {
        q: fuse_query(run_a.results.get(q, []), run_b.results.get(q, []), params, q) for q in qids
    }
    return RunFile(results, tag)
