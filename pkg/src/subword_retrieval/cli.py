"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data/format error, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import corpus_io
from .errors import InvariantViolation, RetrievalToolkitError
from .evaluate import evaluate_run
from .experiment import load_experiment_config, run_experiment
from .fusion import DEFAULT_ALPHA, FusionParams, fuse
from .index import build_index, load_index, read_meta, save_index
from .retrieval import DEFAULT_B, DEFAULT_K, DEFAULT_K1, BM25Params, read_run, run_queries, write_run
from .tokenize import Mechanism, TokenizerConfig, english_stopwords, load_vocab, read_stopwords, save_vocab
from .tokenize.trainer import WordPieceTrainer, count_words

log = logging.getLogger("subword_retrieval")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_tokenizer_flags(p, required: bool):
    p.add_argument("--tokenizer", choices=[m.value for m in Mechanism], required=required)
    p.add_argument("--vocab", help="WordPiece vocab file (one token per line)")
    p.add_argument("--stopwords", help="stopword file for the analyzer (default: bundled English list)")
    p.add_argument("--no-lowercase", action="store_true", help="wordpiece: keep case and accents")
    p.add_argument("--keep-unk", action="store_true", help="wordpiece: index the unknown token")
    p.add_argument("--casefold", action="store_true", help="whitespace: fold case (ablation)")


def _tokenizer_config(args, meta_tokenizer: dict | None = None) -> TokenizerConfig:
    """Build a config from flags; unspecified options default to what the index recorded."""
    recorded = meta_tokenizer or {}
    mech = args.tokenizer or recorded.get("mechanism")
    if mech is None:
        raise UsageError("--tokenizer is required")
    mech = Mechanism(mech)
    # Without --tokenizer, options not given on the command line follow the index.
    inherit = args.tokenizer is None and recorded.get("mechanism") == mech.value
    if mech is Mechanism.WORDPIECE:
        if not args.vocab:
            raise UsageError("--vocab is required for the wordpiece tokenizer")
        lowercase = False if args.no_lowercase else (recorded.get("lowercase", True) if inherit else True)
        drop = False if args.keep_unk else (recorded.get("drop_unknown", True) if inherit else True)
        return TokenizerConfig(mech, vocab=load_vocab(args.vocab), lowercase=lowercase, drop_unknown=drop)
    if mech is Mechanism.ANALYZER:
        if args.stopwords:
            stop = read_stopwords(args.stopwords)
        elif inherit and "stopwords" in recorded:
            stop = frozenset(recorded["stopwords"])
        else:
            stop = english_stopwords()
        return TokenizerConfig(mech, stopword_list=stop)
    casefold = args.casefold or (inherit and recorded.get("casefold", False))
    return TokenizerConfig(mech, casefold=casefold)


def cmd_index(args) -> int:
    config = _tokenizer_config(args)
    corpus_io.ensure_path(args.corpus)
    index = build_index(corpus_io.load_corpus(args.corpus), config, include_title=not args.no_title,
                        threads=args.threads)
    save_index(index, args.out)
    print(f"indexed {index.stats.doc_count} documents into {args.out} ({index.tokenizer_fingerprint})")
    return EXIT_OK


def cmd_search(args) -> int:
    meta = read_meta(args.index)
    config = _tokenizer_config(args, meta.get("tokenizer"))
    index = load_index(args.index)
    index.check_fingerprint(config)
    params = BM25Params(args.k1, args.b)
    queries = corpus_io.load_queries(corpus_io.ensure_path(args.queries))
    tag = args.tag or config.mechanism.value
    run = run_queries(index, queries, config, params, args.k, run_tag=tag, threads=args.threads)
    write_run(run, args.out)
    meta_out = {"k1": params.k1, "b": params.b, "k": args.k, "run_tag": tag,
                "tokenizer": config.fingerprint, "index": str(args.index)}
    Path(str(args.out) + ".meta.json").write_text(json.dumps(meta_out, sort_keys=True, indent=2) + "\n",
                                                  encoding="utf-8")
    return EXIT_OK


def cmd_train_vocab(args) -> int:
    docs = corpus_io.load_corpus(corpus_io.ensure_path(args.corpus))
    trainer = WordPieceTrainer(count_words(docs, lowercase=not args.no_lowercase,
                                           include_title=not args.no_title), args.min_freq)
    vocab = trainer.train(args.size)
    save_vocab(vocab, args.out)
    print(f"wrote {len(vocab)} entries ({len(trainer.merges)} merges) to {args.out}")
    return EXIT_OK


def cmd_fuse(args) -> int:
    run_a = read_run(corpus_io.ensure_path(args.a))
    run_b = read_run(corpus_io.ensure_path(args.b))
    fused = fuse(run_a, run_b, FusionParams(args.alpha, args.k, normalize=not args.raw))
    write_run(fused, args.out)
    return EXIT_OK


def cmd_eval(args) -> int:
    run = read_run(corpus_io.ensure_path(args.run))
    qrels = corpus_io.load_qrels(corpus_io.ensure_path(args.qrels))
    report = evaluate_run(run, qrels, args.k, args.rel_threshold)
    text = report.to_tsv(args.metric)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return EXIT_OK


def cmd_experiment(args) -> int:
    cfg = load_experiment_config(corpus_io.ensure_path(args.config))
    outputs = run_experiment(cfg, args.out, threads=args.threads)
    for label, path in outputs.items():
        print(f"{label}\t{path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="subword-retrieval", description="BM25 retrieval with interchangeable tokenizers.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("index", help="build and persist an inverted index")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    _add_tokenizer_flags(p, required=True)
    p.add_argument("--no-title", action="store_true", help="index passage text only")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("search", help="run a query file against an index, write a TREC run")
    p.add_argument("--index", required=True)
    p.add_argument("--queries", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--k", type=int, default=DEFAULT_K)
    p.add_argument("--k1", type=float, default=DEFAULT_K1)
    p.add_argument("--b", type=float, default=DEFAULT_B)
    p.add_argument("--tag")
    _add_tokenizer_flags(p, required=False)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("train-vocab", help="train a WordPiece vocabulary")
    p.add_argument("--corpus", required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--min-freq", type=int, default=2)
    p.add_argument("--out", required=True)
    p.add_argument("--no-lowercase", action="store_true")
    p.add_argument("--no-title", action="store_true")
    p.set_defaults(func=cmd_train_vocab)

    p = sub.add_parser("fuse", help="fuse two TREC runs")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p.add_argument("--k", type=int, default=DEFAULT_K)
    p.add_argument("--raw", action="store_true", help="weighted sum of raw scores (no min-max)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fuse)

    p = sub.add_parser("eval", help="MRR@k or Recall@k of a TREC run")
    p.add_argument("--run", required=True)
    p.add_argument("--qrels", required=True)
    p.add_argument("--metric", choices=["mrr", "recall"], default="mrr")
    p.add_argument("--k", type=int, default=DEFAULT_K)
    p.add_argument("--rel-threshold", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("experiment", help="full comparison pipeline from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "threads", 1) < 1:
        parser.error("--threads must be >= 1")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"subword-retrieval: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"subword-retrieval: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (RetrievalToolkitError, OSError, ValueError) as exc:
        print(f"subword-retrieval: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
