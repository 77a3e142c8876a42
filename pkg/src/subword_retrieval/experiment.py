"""End-to-end comparison pipeline: index per tokenizer, run, fuse, evaluate, tabulate.

The experiment is described by a JSON file; relative paths inside it are
resolved against the file's directory::

    {
      "corpus": "corpus.jsonl", "queries": "queries.tsv", "qrels": "qrels.txt",
      "language": "en",
      "tokenizers": [
        {"name": "whitespace", "mechanism": "whitespace"},
        {"name": "analyzer", "mechanism": "analyzer"},
        {"name": "wordpiece", "mechanism": "wordpiece", "vocab": "vocab.txt"}
      ],
      "fuse": [["analyzer", "wordpiece"]],
      "bm25": {"k1": 0.9, "b": 0.4}, "alpha": 0.5, "k": 100,
      "language_stats": "langstats.tsv", "article_count": 6000000
    }
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .corpus_io import load_corpus, load_qrels, load_queries
from .errors import ConfigError
from .evaluate import LanguageStats, evaluate_run, load_language_stats, normalize_scores, reference_tags, size_correlation
from .fusion import DEFAULT_ALPHA, FusionParams, fuse
from .index import build_index, save_index
from .retrieval import DEFAULT_K, BM25Params, run_queries, write_run
from .tokenize import Mechanism, TokenizerConfig, english_stopwords, load_vocab, read_stopwords

log = logging.getLogger(__name__)


@dataclass
class TokenizerSpec:
    name: str
    config: TokenizerConfig


@dataclass
class ExperimentConfig:
    corpus: Path
    queries: Path
    qrels: Path
    tokenizers: list[TokenizerSpec]
    fuse_pairs: list[tuple[str, str]] = field(default_factory=list)
    bm25: BM25Params = field(default_factory=BM25Params)
    alpha: float = DEFAULT_ALPHA
    k: int = DEFAULT_K
    include_title: bool = True
    language: str = "corpus"
    language_stats: Optional[Path] = None
    article_count: Optional[int] = None
    reference: Optional[str] = None
    correlate_system: str = "wordpiece"

    def __post_init__(self):
        for label in ("corpus", "queries", "qrels"):
            p = getattr(self, label)
            if not Path(p).is_file():
                raise ConfigError(f"{label} file not found: {p}")
        if not self.tokenizers:
            raise ConfigError("at least one tokenizer configuration is required")
        names = [t.name for t in self.tokenizers]
        if len(set(names)) != len(names):
            raise ConfigError("tokenizer names must be unique")
        for a, b in self.fuse_pairs:
            if a not in names or b not in names:
                raise ConfigError(f"fusion pair ({a}, {b}) names an unknown tokenizer")
        if self.k < 1:
            raise ConfigError("k must be >= 1")


def tokenizer_from_dict(d: dict, base: Path) -> TokenizerSpec:
    try:
        mech = Mechanism(d["mechanism"])
    except (KeyError, ValueError):
        raise ConfigError(f"tokenizer entry needs a valid 'mechanism': {d!r}") from None
    name = d.get("name", mech.value)
    kwargs: dict = {}
    if mech is Mechanism.WORDPIECE:
        if "vocab" not in d:
            raise ConfigError(f"tokenizer {name!r}: wordpiece needs 'vocab'")
        kwargs["vocab"] = load_vocab(base / d["vocab"])
        kwargs["lowercase"] = bool(d.get("lowercase", True))
        kwargs["drop_unknown"] = bool(d.get("drop_unknown", True))
    elif mech is Mechanism.ANALYZER:
        sw = d.get("stopwords")
        kwargs["stopword_list"] = read_stopwords(base / sw) if sw else english_stopwords()
    else:
        kwargs["casefold"] = bool(d.get("casefold", False))
    return TokenizerSpec(name, TokenizerConfig(mech, **kwargs))


def load_experiment_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc.msg})") from None
    base = path.parent
    missing = [key for key in ("corpus", "queries", "qrels", "tokenizers") if key not in raw]
    if missing:
        raise ConfigError(f"{path}: missing required keys {missing}")
    bm25 = raw.get("bm25", {})
    return ExperimentConfig(
        corpus=base / raw["corpus"],
        queries=base / raw["queries"],
        qrels=base / raw["qrels"],
        tokenizers=[tokenizer_from_dict(t, base) for t in raw["tokenizers"]],
        fuse_pairs=[tuple(p) for p in raw.get("fuse", [])],
        bm25=BM25Params(bm25.get("k1", BM25Params.k1), bm25.get("b", BM25Params.b)),
        alpha=raw.get("alpha", DEFAULT_ALPHA),
        k=raw.get("k", DEFAULT_K),
        include_title=raw.get("include_title", True),
        language=raw.get("language", "corpus"),
        language_stats=base / raw["language_stats"] if raw.get("language_stats") else None,
        article_count=raw.get("article_count"),
        reference=raw.get("reference"),
        correlate_system=raw.get("correlate_system", "wordpiece"),
    )


def _run_meta(params: BM25Params, k: int, **extra) -> str:
    meta = {"k1": params.k1, "b": params.b, "k": k, **extra}
    return json.dumps(meta, sort_keys=True, indent=2) + "\n"


def run_experiment(cfg: ExperimentConfig, out_dir, threads: int = 1) -> dict[str, Path]:
    """Execute the pipeline; returns the paths of the emitted TSV files."""
    out = Path(out_dir)
    (out / "runs").mkdir(parents=True, exist_ok=True)
    queries = load_queries(cfg.queries)
    qrels = load_qrels(cfg.qrels)

    runs = {}
    for spec in cfg.tokenizers:
        log.info("indexing with %s", spec.name)
        index = build_index(load_corpus(cfg.corpus), spec.config, cfg.include_title, threads=threads)
        save_index(index, out / "indexes" / spec.name)
        run = run_queries(index, queries, spec.config, cfg.bm25, cfg.k, run_tag=spec.name, threads=threads)
        write_run(run, out / "runs" / f"{spec.name}.run")
        (out / "runs" / f"{spec.name}.run.meta.json").write_text(
            _run_meta(cfg.bm25, cfg.k, tokenizer=spec.config.fingerprint), encoding="utf-8")
        runs[spec.name] = run

    fusion = FusionParams(cfg.alpha, cfg.k)
    for a, b in cfg.fuse_pairs:
        name = f"{a}+{b}"
        fused = fuse(runs[a], runs[b], fusion)
        write_run(fused, out / "runs" / f"{name}.run")
        runs[name] = fused

    k = cfg.k
    reports = {name: evaluate_run(run, qrels, k) for name, run in runs.items()}
    table = out / "table.tsv"
    lines = [f"system\tMRR@{k}\tRecall@{k}\tqueries\n"]
    for name, rep in reports.items():
        lines.append(f"{name}\t{rep.mrr_at_k:.4f}\t{rep.recall_at_k:.4f}\t{rep.num_queries}\n")
    table.write_text("".join(lines), encoding="utf-8")
    outputs = {"table": table}

    own = LanguageStats(cfg.language, cfg.article_count or 1,
                        {name: rep.mrr_at_k for name, rep in reports.items()})
    stats = [own]
    if cfg.language_stats is not None:
        stats = [s for s in load_language_stats(cfg.language_stats) if s.language != cfg.language]
        if cfg.article_count:
            stats.append(own)
    refs = reference_tags(stats)
    if cfg.reference:
        refs[cfg.language] = cfg.reference
    norm = normalize_scores(stats, refs)
    normalized = out / "normalized.tsv"
    lines = [f"language\treference\tsystem\tMRR@{k}\tnormalized\n"]
    for st in stats:
        for tag, value in st.scores.items():
            lines.append(f"{st.language}\t{refs[st.language]}\t{tag}\t{value:.4f}\t{norm[st.language][tag]:.4f}\n")
    normalized.write_text("".join(lines), encoding="utf-8")
    outputs["normalized"] = normalized

    if cfg.language_stats is not None:
        corr = size_correlation(stats, system=cfg.correlate_system)
        counts = {s.language: s.wiki_article_count for s in stats}
        path = out / "correlation.tsv"
        lines = ["language\tarticle_count\tln_article_count\tnormalized_mrr\n"]
        for lang, x, y in zip(corr.languages, corr.log_sizes, corr.normalized):
            lines.append(f"{lang}\t{counts[lang]}\t{x:.6f}\t{y:.6f}\n")
        lines.append(f"pearson_r\t{corr.r:.6f}\n")
        path.write_text("".join(lines), encoding="utf-8")
        outputs["correlation"] = path
    return outputs
