import json

import pytest

from subword_retrieval.cli import main
from subword_retrieval.corpus_io import Document, write_corpus
from subword_retrieval.index import INDEX_FILES
from subword_retrieval.tokenize import load_vocab
from subword_retrieval.tokenize.trainer import WordPieceTrainer, count_words

from toy_data import write_toy_experiment


@pytest.fixture
def toy(tmp_path):
    cfg = write_toy_experiment(tmp_path / "toy")
    return cfg.parent


def _index(toy, out, *flags):
    return main(["index", "--corpus", str(toy / "corpus.jsonl"), "--out", str(out), *flags])


def test_index_layout_and_fingerprint(toy, tmp_path):
    assert _index(toy, tmp_path / "ix", "--tokenizer", "analyzer") == 0
    assert sorted(p.name for p in (tmp_path / "ix").iterdir()) == sorted(INDEX_FILES)
    meta = json.loads((tmp_path / "ix" / "meta.json").read_text())
    assert meta["tokenizer_fingerprint"].startswith("analyzer:porter:stop=")


def test_index_missing_corpus(tmp_path):
    assert main(["index", "--corpus", str(tmp_path / "nope.jsonl"), "--out", str(tmp_path / "ix"),
                 "--tokenizer", "whitespace"]) != 0


def test_index_requires_tokenizer(toy, tmp_path):
    with pytest.raises(SystemExit) as exc:
        _index(toy, tmp_path / "ix")
    assert exc.value.code == 1


def test_search_defaults_recorded(toy, tmp_path):
    _index(toy, tmp_path / "ix", "--tokenizer", "whitespace")
    run = tmp_path / "ws.run"
    assert main(["search", "--index", str(tmp_path / "ix"), "--queries", str(toy / "queries.tsv"),
                 "--out", str(run)]) == 0
    meta = json.loads(run.with_name("ws.run.meta.json").read_text())
    assert (meta["k1"], meta["b"], meta["k"]) == (0.9, 0.4, 100)
    lines = run.read_text().splitlines()
    assert lines and all(len(line.split()) == 6 for line in lines)


def test_search_mismatched_tokenizer(toy, tmp_path):
    _index(toy, tmp_path / "ix", "--tokenizer", "whitespace")
    assert main(["search", "--index", str(tmp_path / "ix"), "--queries", str(toy / "queries.tsv"),
                 "--out", str(tmp_path / "r.run"), "--tokenizer", "analyzer"]) != 0


def test_search_empty_query_file(toy, tmp_path):
    _index(toy, tmp_path / "ix", "--tokenizer", "whitespace")
    (tmp_path / "empty.tsv").write_text("")
    assert main(["search", "--index", str(tmp_path / "ix"), "--queries", str(tmp_path / "empty.tsv"),
                 "--out", str(tmp_path / "r.run")]) == 0
    assert (tmp_path / "r.run").read_text() == ""


def test_train_vocab(tmp_path):
    corpus = tmp_path / "c.jsonl"
    write_corpus([Document("d1", "", "hug hug hug pug pun bun hugs")], corpus)
    out = tmp_path / "v.txt"
    assert main(["train-vocab", "--corpus", str(corpus), "--size", "15", "--out", str(out)]) == 0
    trainer = WordPieceTrainer(count_words([Document("d1", "", "hug hug hug pug pun bun hugs")]), 2)
    assert load_vocab(out).entries == trainer.train(15).entries
    first = out.read_bytes()
    main(["train-vocab", "--corpus", str(corpus), "--size", "15", "--out", str(out)])
    assert out.read_bytes() == first
    assert main(["train-vocab", "--corpus", str(corpus), "--size", "3", "--out", str(out)]) != 0


def _write_run(path, rows):
    path.write_text("".join(f"{q} Q0 {d} {r} {s} t\n" for q, d, r, s in rows))


def test_fuse_default_alpha(tmp_path):
    _write_run(tmp_path / "a.run", [("q", "d1", 1, 10.0), ("q", "d2", 2, 0.0)])
    _write_run(tmp_path / "b.run", [("q", "d2", 1, 5.0), ("q", "d3", 2, 1.0)])
    assert main(["fuse", "--a", str(tmp_path / "a.run"), "--b", str(tmp_path / "b.run"),
                 "--out", str(tmp_path / "f.run")]) == 0
    rows = [line.split() for line in (tmp_path / "f.run").read_text().splitlines()]
    assert [(r[2], float(r[4])) for r in rows] == [("d1", 0.5), ("d2", 0.5), ("d3", 0.0)]
    assert rows[0][5] == "fuse(t,t,0.5)"


def test_eval_hand_fixture(tmp_path, capsys):
    _write_run(tmp_path / "r.run", [("q1", "x", 1, 2), ("q1", "r1", 2, 1)]
               + [("q2", d, i + 1, 9 - i) for i, d in enumerate(["a", "b", "c", "d", "r2"])])
    (tmp_path / "qrels").write_text("q1 0 r1 1\nq2 0 r2 1\n")
    assert main(["eval", "--run", str(tmp_path / "r.run"), "--qrels", str(tmp_path / "qrels")]) == 0
    assert capsys.readouterr().out.splitlines()[-1] == "mrr@100\tALL\t0.3500"


def test_eval_unknown_metric(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["eval", "--run", "r", "--qrels", "q", "--metric", "ndcg"])
    assert exc.value.code == 1


def test_experiment_outputs_and_determinism(toy, tmp_path):
    cfg = str(toy / "config.json")
    assert main(["experiment", "--config", cfg, "--out", str(tmp_path / "o1")]) == 0
    assert main(["experiment", "--config", cfg, "--out", str(tmp_path / "o2")]) == 0
    for name in ("table.tsv", "normalized.tsv", "correlation.tsv"):
        assert (tmp_path / "o1" / name).read_bytes() == (tmp_path / "o2" / name).read_bytes()
    table = (tmp_path / "o1" / "table.tsv").read_text().splitlines()
    assert [row.split("\t")[0] for row in table[1:]] == ["whitespace", "analyzer", "wordpiece",
                                                         "analyzer+wordpiece"]
    assert (tmp_path / "o1" / "correlation.tsv").read_text().splitlines()[-1].startswith("pearson_r\t")


def test_experiment_missing_qrels(toy, tmp_path):
    (toy / "qrels.txt").unlink()
    assert main(["experiment", "--config", str(toy / "config.json"), "--out", str(tmp_path / "o")]) != 0
