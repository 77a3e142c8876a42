import math
import warnings

import numpy as np
import pytest
from scipy import stats as scipy_stats

from subword_retrieval.corpus_io import Qrels
from subword_retrieval.errors import ConfigError, ContractViolation
from subword_retrieval.evaluate import (
    EvalWarning,
    LanguageStats,
    evaluate_run,
    load_language_stats,
    mrr_at_k,
    normalize_scores,
    pearson_r,
    recall_at_k,
    reference_tags,
    size_correlation,
)
from subword_retrieval.retrieval import RunFile, ScoredDoc


def _run(per_query):
    return RunFile({q: [ScoredDoc(d, float(-i), i + 1) for i, d in enumerate(docs)]
                    for q, docs in per_query.items()})


def _qrels(per_query):
    return Qrels({q: {d: 1 for d in docs} for q, docs in per_query.items()})


def test_first_rank_relevant():
    assert mrr_at_k(_run({"q": ["r", "x"]}), _qrels({"q": ["r"]})).mrr_at_k == 1.0


def test_rank_three():
    docs = [f"x{i}" for i in range(100)]
    docs[2] = "r"
    rep = mrr_at_k(_run({"q": docs}), _qrels({"q": ["r"]}), k=100)
    assert rep.reciprocal_rank["q"] == pytest.approx(1 / 3)


def test_two_query_mean():
    run = _run({"q1": ["x", "r1"], "q2": ["a", "b", "c", "d", "r2"]})
    rep = mrr_at_k(run, _qrels({"q1": ["r1"], "q2": ["r2"]}))
    assert rep.mrr_at_k == pytest.approx(0.35, abs=1e-15)


def test_recall_examples():
    docs = [f"x{i}" for i in range(99)] + ["r"]
    assert recall_at_k(_run({"q": docs}), _qrels({"q": ["r"]}), k=100).recall["q"] == 1.0
    assert recall_at_k(_run({"q": ["r1", "x"]}), _qrels({"q": ["r1", "r2"]})).recall_at_k == 0.5
    assert recall_at_k(_run({"q": docs}), _qrels({"q": ["r"]}), k=50).recall_at_k == 0.0


def test_unjudged_query_excluded_with_warning():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rep = evaluate_run(_run({"q1": ["r"], "qx": ["r"]}), _qrels({"q1": ["r"]}))
    assert rep.num_queries == 1 and rep.n_unjudged == 1
    assert any(issubclass(w.category, EvalWarning) for w in caught)


def test_no_relevant_excluded_and_counted():
    qrels = Qrels({"q1": {"r": 1}, "q2": {"n": 0}})
    rep = evaluate_run(_run({"q1": ["r"], "q2": ["n"]}), qrels)
    assert rep.num_queries == 1 and rep.n_no_relevant == 1


def test_judged_query_missing_from_run_scores_zero():
    rep = evaluate_run(_run({"q1": ["r"]}), _qrels({"q1": ["r"], "q2": ["s"]}))
    assert rep.reciprocal_rank == {"q1": 1.0, "q2": 0.0}


def test_irrelevant_permutation_invariance():
    a = _run({"q": ["x", "y", "z", "r", "w"]})
    b = _run({"q": ["z", "x", "y", "r", "w"]})
    q = _qrels({"q": ["r"]})
    assert mrr_at_k(a, q).mrr_at_k == mrr_at_k(b, q).mrr_at_k


def test_tsv_output():
    run = _run({"q1": ["x", "r1"], "q2": ["a", "b", "c", "d", "r2"]})
    text = mrr_at_k(run, _qrels({"q1": ["r1"], "q2": ["r2"]})).to_tsv("mrr")
    assert text.splitlines()[-1] == "mrr@100\tALL\t0.3500"


def test_normalize_scores():
    st = [LanguageStats("x", 10, {"A": 0.30, "B": 0.15})]
    assert normalize_scores(st, {"x": "A"}) == {"x": {"A": 1.0, "B": 0.5}}
    sw = [LanguageStats("sw", 5, {"whitespace": 0.4, "wordpiece": 0.5})]
    table = normalize_scores(sw, reference_tags(sw))
    assert table["sw"]["whitespace"] == 1.0


def test_normalize_missing_reference():
    with pytest.raises(ConfigError, match="x"):
        normalize_scores([LanguageStats("x", 10, {"A": 0.0})], {"x": "A"})


def test_normalize_preserves_order():
    rng = np.random.default_rng(1)
    scores = dict(zip("ABCDE", rng.uniform(0.01, 1, 5)))
    norm = normalize_scores([LanguageStats("x", 3, scores)], {"x": "C"})["x"]
    assert sorted(scores, key=scores.get) == sorted(norm, key=norm.get)


def test_pearson_examples():
    xs = [1.0, 2.0, 3.0, 4.5]
    assert pearson_r(xs, [2 * x + 1 for x in xs]) == pytest.approx(1.0, abs=1e-12)
    assert pearson_r(xs, [-x for x in xs]) == pytest.approx(-1.0, abs=1e-12)
    assert pearson_r([1, 2, 3], [1, 3, 2]) == pytest.approx(0.5, abs=1e-12)


def test_pearson_against_scipy():
    rng = np.random.default_rng(5)
    for _ in range(50):
        x, y = rng.normal(size=12), rng.normal(size=12)
        assert pearson_r(x, y) == pytest.approx(scipy_stats.pearsonr(x, y)[0], abs=1e-12)


def test_pearson_errors():
    with pytest.raises(ContractViolation):
        pearson_r([1, 1, 1], [1, 2, 3])
    with pytest.raises(ContractViolation):
        pearson_r([1], [1])
    with pytest.raises(ContractViolation):
        pearson_r([1, 2], [1, 2, 3])


def test_language_stats_and_correlation(tmp_path):
    p = tmp_path / "langs.tsv"
    p.write_text(
        "# language\tarticles\tsystem\tmrr\n"
        "aa\t1000\tanalyzer\t0.40\naa\t1000\twordpiece\t0.20\n"
        "bb\t100000\tanalyzer\t0.50\nbb\t100000\twordpiece\t0.45\n"
        "cc\t10000000\tanalyzer\t0.30\ncc\t10000000\twordpiece\t0.30\n"
        "sw\t60000\twhitespace\t0.30\nsw\t60000\twordpiece\t0.40\n",
        encoding="utf-8",
    )
    stats = load_language_stats(p)
    corr = size_correlation(stats)
    assert corr.languages == ["aa", "bb", "cc"]
    xs = [math.log(1000), math.log(100000), math.log(10000000)]
    assert corr.log_sizes == pytest.approx(xs)
    assert corr.normalized == pytest.approx([0.5, 0.9, 1.0])
    assert corr.r == pytest.approx(scipy_stats.pearsonr(xs, [0.5, 0.9, 1.0])[0], abs=1e-12)
