"""Capture reference WordPiece output into a conformance fixture (one-time oracle step).

The reference is the ``transformers`` BERT tokenizer (pure-Python
implementation), run uncased with accent stripping and CJK isolation.
Output directory receives:

    vocab.txt          the vocabulary used (copied or trained)
    conformance.tsv    input<TAB>space-joined reference tokens, 1,000 lines
    strings.meta.json  generator settings

Two modes::

    # published multilingual vocabulary (e.g. bert-base-multilingual-uncased/vocab.txt)
    python tools/make_wordpiece_fixture.py --vocab /path/to/vocab.txt --out tests/fixtures/mbert

    # substitute vocabulary trained locally, used when the published file is unavailable
    python tools/make_wordpiece_fixture.py --train-size 6000 --out tests/fixtures/wordpiece_substitute

Requires ``faker`` (text generation) and ``transformers`` (reference tokenizer).
"""

import argparse
import json
import random
import shutil
from pathlib import Path

from faker import Faker

LOCALES = [
    "ar_SA", "bn_BD", "en_US", "fi_FI", "id_ID", "ja_JP", "ko_KR", "ru_RU", "th_TH",
    "zh_CN", "hi_IN", "el_GR", "de_DE", "fr_FR", "vi_VN", "he_IL", "tr_TR", "cs_CZ", "pl_PL",
]

# Characters that exercise the normalization rules: controls and format
# characters (removed), exotic spaces (separators), combining marks,
# symbols vs punctuation, a CJK compatibility ideograph.
NOISE = ["\x00", "\x07", "​", "﻿", "­", "　", "\xa0", "\x0b", " ", " ",
         "́", "̈", "$", "^", "`", "~", "|", "+", "<", "=", "¿", "—", "«",
         "「", "。", "豈", "\U0001F600", "é", "Å", "İ", "Σ", "�"]


def generate_strings(n, seed):
    rng = random.Random(seed)
    fakers = {loc: Faker(loc) for loc in LOCALES}
    for i, f in enumerate(fakers.values()):
        f.seed_instance(seed * 1000 + i)
    out = []
    while len(out) < n:
        loc = rng.choice(LOCALES)
        f = fakers[loc]
        kind = rng.random()
        if kind < 0.4:
            s = f.sentence(nb_words=rng.randint(3, 12))
        elif kind < 0.6:
            s = f.name() + ", " + f.city()
        elif kind < 0.8:
            s = f.text(max_nb_chars=rng.randint(40, 160))
        else:
            s = f.address()
        s = s.replace("\t", " ").replace("\r", " ").replace("\n", " ")
        if rng.random() < 0.5:
            s = s.upper() if rng.random() < 0.3 else s.title()
        for _ in range(rng.randint(0, 3)):
            pos = rng.randint(0, len(s))
            s = s[:pos] + rng.choice(NOISE) + s[pos:]
        if rng.random() < 0.03:
            s += " " + "x" * rng.randint(95, 130)
        if "[" in s or "]" in s:
            continue
        out.append(s)
    return out


def reference_tokenizer(vocab_path):
    from transformers import BertTokenizer

    return BertTokenizer(str(vocab_path), do_lower_case=True, tokenize_chinese_chars=True, strip_accents=None)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--vocab", help="published vocab file to copy and use")
    ap.add_argument("--train-size", type=int, help="train a substitute vocabulary of this size")
    ap.add_argument("--out", required=True)
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=13)
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    vocab_path = out / "vocab.txt"
    if args.vocab:
        shutil.copyfile(args.vocab, vocab_path)
    elif args.train_size:
        from subword_retrieval.corpus_io import Document
        from subword_retrieval.tokenize import save_vocab, train_wordpiece

        training = generate_strings(20000, args.seed + 1)
        docs = (Document(str(i), "", s) for i, s in enumerate(training))
        save_vocab(train_wordpiece(docs, args.train_size, min_pair_freq=2, include_title=False), vocab_path)
    else:
        ap.error("one of --vocab or --train-size is required")

    tok = reference_tokenizer(vocab_path)
    strings = generate_strings(args.n, args.seed)
    with open(out / "conformance.tsv", "w", encoding="utf-8", newline="\n") as fh:
        for s in strings:
            fh.write(s + "\t" + " ".join(tok.tokenize(s)) + "\n")
    meta = {"n": args.n, "seed": args.seed, "locales": LOCALES, "reference": "transformers.BertTokenizer",
            "do_lower_case": True, "source_vocab": "published" if args.vocab else f"trained:{args.train_size}"}
    (out / "strings.meta.json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
