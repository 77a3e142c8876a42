import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from subword_retrieval.corpus_io import Document, Query
from subword_retrieval.errors import ContractViolation, FingerprintMismatchError
from subword_retrieval.index import IndexStats, build_index
from subword_retrieval.retrieval import (
    BM25Params,
    RunFile,
    ScoredDoc,
    bm25_term_score,
    read_run,
    run_queries,
    search,
    write_run,
)
from subword_retrieval.tokenize import TokenizerConfig, tokenize

from oracles import brute_force_bm25

DEFAULTS = BM25Params()


def test_defaults():
    assert (DEFAULTS.k1, DEFAULTS.b) == (0.9, 0.4)


def test_hand_value():
    got = bm25_term_score(1, 1, 4, DEFAULTS, IndexStats(2, 4.0, 8))
    assert got == pytest.approx(math.log(2) / 1.9, abs=1e-12)


def test_zero_tf():
    assert bm25_term_score(0, 1, 7, DEFAULTS, IndexStats(3, 2.0, 6)) == 0.0


def test_b_zero_removes_length():
    p = BM25Params(0.9, 0.0)
    stats = IndexStats(10, 5.0, 50)
    assert bm25_term_score(2, 3, 1, p, stats) == bm25_term_score(2, 3, 1000, p, stats)


@pytest.mark.parametrize("df", [0, 3])
def test_df_out_of_range(df):
    with pytest.raises(ContractViolation):
        bm25_term_score(1, df, 1, DEFAULTS, IndexStats(2, 1.0, 2))


@settings(max_examples=200)
@given(st.integers(1, 50), st.integers(1, 99), st.integers(0, 500),
       st.floats(0.1, 3.0), st.floats(0.01, 1.0), st.floats(0.5, 200))
def test_monotonicity(tf, df, dl, k1, b, avgdl):
    p = BM25Params(k1, b)
    stats = IndexStats(100, avgdl, 0)
    s = bm25_term_score(tf, df, dl, p, stats)
    assert s > 0
    assert bm25_term_score(tf + 1, df, dl, p, stats) > s
    assert bm25_term_score(tf, df + 1, dl, p, stats) < s
    assert bm25_term_score(tf, df, dl + 1, p, stats) < s


def test_search_two_docs(two_docs, ws_config):
    idx = build_index(two_docs, ws_config)
    hits = search(idx, "a", ws_config)
    expected = bm25_term_score(2, 1, 3, DEFAULTS, IndexStats(2, 2.5, 5))
    assert [h.doc_id for h in hits] == ["d1"]
    assert hits[0].score == pytest.approx(expected, abs=1e-12)
    # hand oracle: ln(1 + 1.5/1.5) * 2 / (2 + 0.9 * (0.6 + 0.4 * 3 / 2.5))
    assert expected == pytest.approx(math.log(2) * 2 / (2 + 0.9 * (0.6 + 0.48)), abs=1e-12)


def test_search_oov_only(two_docs, ws_config):
    assert search(build_index(two_docs, ws_config), "zzz qqq", ws_config) == []


def test_tie_break_by_doc_id(ws_config):
    docs = [Document("b", "", "x y"), Document("a", "", "x y"), Document("c", "", "y")]
    hits = search(build_index(docs, ws_config), "x", ws_config)
    assert [h.doc_id for h in hits] == ["a", "b"]
    assert [h.rank for h in hits] == [1, 2]


def test_query_term_repetition_counts(two_docs, ws_config):
    idx = build_index(two_docs, ws_config)
    once = search(idx, "b", ws_config)
    twice = search(idx, "b b", ws_config)
    for h1, h2 in zip(once, twice):
        assert h2.score == pytest.approx(2 * h1.score)


def test_fingerprint_mismatch(two_docs, ws_config):
    idx = build_index(two_docs, ws_config)
    with pytest.raises(FingerprintMismatchError):
        search(idx, "a", TokenizerConfig("analyzer", stopword_list=set()))


def _random_corpus(rng, n_docs):
    vocab = [f"t{i}" for i in range(rng.randint(5, 60))]
    docs = [Document(f"d{i:04d}", "", " ".join(rng.choice(vocab) for _ in range(rng.randint(0, 25))))
            for i in range(n_docs)]
    return docs, vocab


@pytest.mark.parametrize("seed", range(5))
def test_matches_brute_force(seed, ws_config):
    rng = random.Random(seed)
    docs, vocab = _random_corpus(rng, rng.randint(1, 200))
    idx = build_index(docs, ws_config)
    tokens = [tokenize(d.indexed_text(), ws_config) for d in docs]
    for _ in range(20):
        q = " ".join(rng.choice(vocab + ["oov"]) for _ in range(rng.randint(1, 6)))
        k = rng.randint(1, 30)
        got = [(h.doc_id, h.score) for h in search(idx, q, ws_config, k=k)]
        want = brute_force_bm25(tokens, [d.doc_id for d in docs], q.split(), 0.9, 0.4, k)
        assert [g[0] for g in got] == [w[0] for w in want]
        for (_, a), (_, b) in zip(got, want):
            assert abs(a - b) <= 1e-9


def test_cutoff_prefix(ws_config):
    rng = random.Random(7)
    docs, vocab = _random_corpus(rng, 150)
    idx = build_index(docs, ws_config)
    for _ in range(10):
        q = " ".join(rng.sample(vocab, 3))
        for k in (1, 5, 17):
            assert search(idx, q, ws_config, k=k) == search(idx, q, ws_config, k=k + 1)[:k]


def test_run_queries(two_docs, ws_config):
    idx = build_index(two_docs, ws_config)
    run = run_queries(idx, [Query("q1", "a"), Query("q2", "zzz"), Query("q3", "b c")], ws_config, k=1)
    assert run.query_ids() == ["q1", "q2", "q3"]
    assert run.results["q2"] == []
    assert all(len(h) <= 1 for h in run.results.values())
    assert run_queries(idx, [], ws_config).results == {}


def test_run_queries_threads_equal(ws_config):
    rng = random.Random(3)
    docs, vocab = _random_corpus(rng, 120)
    idx = build_index(docs, ws_config)
    queries = [Query(f"q{i}", " ".join(rng.sample(vocab, 3))) for i in range(30)]
    assert run_queries(idx, queries, ws_config, threads=1).results == \
        run_queries(idx, queries, ws_config, threads=8).results


def test_run_file_round_trip(tmp_path):
    run = RunFile({"q1": [ScoredDoc("d2", 1.5, 1), ScoredDoc("d1", 0.25, 2)], "q2": []}, "tag")
    write_run(run, tmp_path / "r.run")
    text = (tmp_path / "r.run").read_text()
    assert text.splitlines()[0] == "q1 Q0 d2 1 1.500000 tag"
    back = read_run(tmp_path / "r.run")
    assert back.results["q1"] == run.results["q1"]
    assert back.run_tag == "tag"
