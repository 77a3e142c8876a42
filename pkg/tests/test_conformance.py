"""Agreement with captured reference-tokenizer output (see tools/make_wordpiece_fixture.py).

This module checks the substitute-vocabulary fixture, which is always
present. The published 110k multilingual vocabulary check lives in
test_acceptance.py.
"""

from subword_retrieval.tokenize import TokenizerConfig, load_vocab, wordpiece_tokenize


def read_conformance(path):
    with open(path, encoding="utf-8", newline="") as fh:
        for line in fh:
            text, tokens = line.rstrip("\n").split("\t")
            yield text, tokens.split(" ") if tokens else []


def conformance_failures(fixture_dir):
    vocab = load_vocab(fixture_dir / "vocab.txt")
    cfg = TokenizerConfig("wordpiece", vocab=vocab, drop_unknown=False)
    total, failures = 0, []
    for text, expected in read_conformance(fixture_dir / "conformance.tsv"):
        total += 1
        got = wordpiece_tokenize(text, cfg)
        if got != expected:
            failures.append((text, expected, got))
    return total, failures


def test_substitute_vocab_conformance(fixtures_dir):
    total, failures = conformance_failures(fixtures_dir / "wordpiece_substitute")
    assert total == 1000
    assert failures == []


def test_fixture_exercises_unknowns_and_continuations(fixtures_dir):
    rows = list(read_conformance(fixtures_dir / "wordpiece_substitute" / "conformance.tsv"))
    flat = [t for _, toks in rows for t in toks]
    assert any(t == "[UNK]" for t in flat)
    assert sum(t.startswith("##") and len(t) > 3 for t in flat) > 100
