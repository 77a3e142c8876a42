"""Inverted index construction and persistence.

On-disk layout of an index directory::

    meta.json     stats, tokenizer fingerprint, format version, sha256 per file
    dict.bin      magic, version, term count, then sorted term records
                  (u32 byte length, utf-8 term, u32 df, u64 offset, u64 nbytes)
    postings.bin  magic, version, then per term: varints (ordinal delta, tf)...
    doclen.bin    magic, version, u64 N, N x u32 document lengths
    docids.tsv    ordinal<TAB>external doc id

All integers are little-endian.
"""

from __future__ import annotations

import hashlib
import json
import logging
import struct
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import islice
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

from .corpus_io import Document
from .errors import (
    ChecksumError,
    ConfigError,
    DuplicateIdError,
    FingerprintMismatchError,
    IndexFormatError,
    InvariantViolation,
)
from .tokenize import TokenizerConfig, tokenize
from .varint import decode_varint_array, encode_varints

log = logging.getLogger(__name__)

FORMAT_NAME = "subword-retrieval-index"
FORMAT_VERSION = 1
INDEX_FILES = ("meta.json", "dict.bin", "postings.bin", "doclen.bin", "docids.tsv")
_MAGIC = {"dict.bin": b"SWRIDICT", "postings.bin": b"SWRIPOST", "doclen.bin": b"SWRIDLEN"}
_HEADER = struct.Struct("<8sI")
_TERM_RECORD = struct.Struct("<IQQ")


class PostingList(NamedTuple):
    doc_ordinals: np.ndarray  # strictly ascending int64
    term_freqs: np.ndarray  # int64, all >= 1

    @property
    def df(self) -> int:
        return int(self.doc_ordinals.size)


@dataclass(frozen=True)
class IndexStats:
    doc_count: int
    avg_doc_len: float
    total_tokens: int


@dataclass
class InvertedIndex:
    dictionary: dict[str, PostingList]
    doc_lengths: np.ndarray
    doc_ids: list[str]
    stats: IndexStats
    tokenizer_fingerprint: str
    tokenizer: dict = field(default_factory=dict)
    include_title: bool = True
    _ordinals: dict = field(default=None, init=False, repr=False, compare=False)

    def ordinal(self, doc_id: str) -> int:
        if self._ordinals is None:
            self._ordinals = {d: i for i, d in enumerate(self.doc_ids)}
        return self._ordinals[doc_id]

    def df(self, term: str) -> int:
        pl = self.dictionary.get(term)
        return 0 if pl is None else pl.df

    def check_fingerprint(self, config: TokenizerConfig) -> None:
        if config.fingerprint != self.tokenizer_fingerprint:
            raise FingerprintMismatchError(
                f"query tokenizer {config.fingerprint!r} does not match index tokenizer "
                f"{self.tokenizer_fingerprint!r}"
            )

    def check_consistency(self) -> None:
        """Full scan of the df / dl / total_tokens invariants."""
        n = self.stats.doc_count
        if n != len(self.doc_ids) or n != self.doc_lengths.size:
            raise InvariantViolation("document count disagrees across doc ids, lengths and stats")
        recomputed = np.zeros(n, dtype=np.int64)
        total = 0
        for term, pl in self.dictionary.items():
            ords, tfs = pl
            if ords.size == 0:
                raise InvariantViolation(f"term {term!r} has an empty posting list")
            if ords.size != tfs.size:
                raise InvariantViolation(f"term {term!r}: ordinal/tf length mismatch")
            if np.any(np.diff(ords) <= 0) or ords[0] < 0 or ords[-1] >= n:
                raise InvariantViolation(f"term {term!r}: ordinals not strictly ascending in range")
            if np.any(tfs < 1):
                raise InvariantViolation(f"term {term!r}: term frequency below 1")
            np.add.at(recomputed, ords, tfs)
            total += int(tfs.sum())
        if not np.array_equal(recomputed, self.doc_lengths):
            raise InvariantViolation("document lengths differ from the sum of term frequencies")
        if total != self.stats.total_tokens:
            raise InvariantViolation("total_tokens differs from the sum of term frequencies")
        expected_avg = total / n if n else 0.0
        if self.stats.avg_doc_len != expected_avg:
            raise InvariantViolation("avg_doc_len differs from total_tokens / doc_count")


def _tokenize_chunk(docs: list[Document], config: TokenizerConfig, include_title: bool) -> list[list[str]]:
    return [tokenize(d.indexed_text(include_title), config) for d in docs]


def _batches(docs: Iterable[Document], size: int):
    it = iter(docs)
    while True:
        batch = list(islice(it, size))
        if not batch:
            return
        yield batch


def build_index(docs: Iterable[Document], config: TokenizerConfig, include_title: bool = True,
                threads: int = 1, batch_size: int = 1024) -> InvertedIndex:
    """Tokenize and invert a document stream.

    Ordinals follow ingestion order. With ``threads > 1`` each batch is
    tokenized in parallel chunks and merged back in ordinal order, so the
    result does not depend on the degree of parallelism.
    """
    postings: dict[str, tuple[list[int], list[int]]] = {}
    doc_ids: list[str] = []
    lengths: list[int] = []
    seen: set[str] = set()
    executor = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for batch in _batches(docs, batch_size):
            if executor is None:
                token_lists = _tokenize_chunk(batch, config, include_title)
            else:
                step = max(1, -(-len(batch) // threads))
                chunks = [batch[i:i + step] for i in range(0, len(batch), step)]
                token_lists = []
                for part in executor.map(_tokenize_chunk, chunks, [config] * len(chunks),
                                         [include_title] * len(chunks)):
                    token_lists.extend(part)
            for doc, tokens in zip(batch, token_lists):
                if doc.doc_id in seen:
                    raise DuplicateIdError(doc.doc_id, kind="document id")
                seen.add(doc.doc_id)
                ordinal = len(doc_ids)
                doc_ids.append(doc.doc_id)
                lengths.append(len(tokens))
                for term, tf in Counter(tokens).items():
                    entry = postings.get(term)
                    if entry is None:
                        entry = postings[term] = ([], [])
                    entry[0].append(ordinal)
                    entry[1].append(tf)
    finally:
        if executor is not None:
            executor.shutdown()
    if not doc_ids:
        raise ConfigError("cannot build an index from zero documents")

    dictionary = {
        term: PostingList(np.asarray(o, dtype=np.int64), np.asarray(t, dtype=np.int64))
        for term, (o, t) in sorted(postings.items())
    }
    doc_lengths = np.asarray(lengths, dtype=np.int64)
    total = int(doc_lengths.sum())
    n = len(doc_ids)
    stats = IndexStats(doc_count=n, avg_doc_len=total / n, total_tokens=total)
    log.info("indexed %d documents, %d terms, %d tokens", n, len(dictionary), total)
    return InvertedIndex(dictionary, doc_lengths, doc_ids, stats, config.fingerprint,
                         config.describe(), include_title)


# -- persistence ----------------------------------------------------------


def _encode_dict_and_postings(index: InvertedIndex) -> tuple[bytes, bytes]:
    dict_buf = bytearray(_HEADER.pack(_MAGIC["dict.bin"], FORMAT_VERSION))
    dict_buf += struct.pack("<Q", len(index.dictionary))
    post_buf = bytearray(_HEADER.pack(_MAGIC["postings.bin"], FORMAT_VERSION))
    for term in sorted(index.dictionary):
        ords, tfs = index.dictionary[term]
        deltas = np.diff(ords, prepend=0)
        inter = np.empty(2 * ords.size, dtype=np.int64)
        inter[0::2] = deltas
        inter[1::2] = tfs
        offset = len(post_buf)
        encode_varints(inter.tolist(), post_buf)
        raw = term.encode("utf-8")
        dict_buf += struct.pack("<I", len(raw)) + raw
        dict_buf += _TERM_RECORD.pack(ords.size, offset, len(post_buf) - offset)
    return bytes(dict_buf), bytes(post_buf)


def _canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def save_index(index: InvertedIndex, path) -> None:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    dict_bytes, post_bytes = _encode_dict_and_postings(index)
    n = index.stats.doc_count
    doclen_bytes = (
        _HEADER.pack(_MAGIC["doclen.bin"], FORMAT_VERSION)
        + struct.pack("<Q", n)
        + index.doc_lengths.astype("<u4").tobytes()
    )
    lines = []
    for i, d in enumerate(index.doc_ids):
        if "\n" in d or "\r" in d:
            raise ConfigError(f"document id {d!r} contains a line break")
        lines.append(f"{i}\t{d}\n")
    docid_bytes = "".join(lines).encode("utf-8")

    payloads = {
        "dict.bin": dict_bytes,
        "postings.bin": post_bytes,
        "doclen.bin": doclen_bytes,
        "docids.tsv": docid_bytes,
    }
    for name, data in payloads.items():
        (out / name).write_bytes(data)
    meta = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "stats": {
            "doc_count": n,
            "avg_doc_len": index.stats.avg_doc_len,
            "total_tokens": index.stats.total_tokens,
            "term_count": len(index.dictionary),
        },
        "tokenizer_fingerprint": index.tokenizer_fingerprint,
        "tokenizer": index.tokenizer,
        "include_title": index.include_title,
        "checksums": {name: hashlib.sha256(data).hexdigest() for name, data in payloads.items()},
    }
    (out / "meta.json").write_text(_canonical_json(meta), encoding="utf-8")


def read_meta(path) -> dict:
    meta_path = Path(path) / "meta.json"
    if not meta_path.is_file():
        raise IndexFormatError(f"missing index file {meta_path}")
    try:
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise IndexFormatError(f"unreadable {meta_path}: {exc}") from None
    if meta.get("format") != FORMAT_NAME:
        raise IndexFormatError(f"{meta_path} is not a {FORMAT_NAME} directory")
    if meta.get("version") != FORMAT_VERSION:
        raise IndexFormatError(
            f"index format version {meta.get('version')!r} not supported (expected {FORMAT_VERSION})"
        )
    return meta


def _check_header(name: str, data: bytes) -> int:
    if len(data) < _HEADER.size:
        raise IndexFormatError(f"{name}: truncated header")
    magic, version = _HEADER.unpack_from(data, 0)
    if magic != _MAGIC[name]:
        raise IndexFormatError(f"{name}: bad magic header")
    if version != FORMAT_VERSION:
        raise IndexFormatError(f"{name}: format version {version} not supported (expected {FORMAT_VERSION})")
    return _HEADER.size


def load_index(path, verify: bool = True) -> InvertedIndex:
    root = Path(path)
    for name in INDEX_FILES:
        if not (root / name).is_file():
            raise IndexFormatError(f"missing index file {root / name}")
    meta = read_meta(root)
    data = {name: (root / name).read_bytes() for name in INDEX_FILES if name != "meta.json"}
    for name, blob in data.items():
        expected = meta.get("checksums", {}).get(name)
        if expected != hashlib.sha256(blob).hexdigest():
            raise ChecksumError(f"checksum mismatch for {root / name}")

    try:
        dict_bytes = data["dict.bin"]
        pos = _check_header("dict.bin", dict_bytes)
        (n_terms,) = struct.unpack_from("<Q", dict_bytes, pos)
        pos += 8
        post_bytes = data["postings.bin"]
        _check_header("postings.bin", post_bytes)
        dictionary: dict[str, PostingList] = {}
        for _ in range(n_terms):
            (tlen,) = struct.unpack_from("<I", dict_bytes, pos)
            pos += 4
            term = dict_bytes[pos:pos + tlen].decode("utf-8")
            pos += tlen
            df, offset, nbytes = _TERM_RECORD.unpack_from(dict_bytes, pos)
            pos += _TERM_RECORD.size
            values = decode_varint_array(post_bytes[offset:offset + nbytes]).astype(np.int64)
            if values.size != 2 * df:
                raise IndexFormatError(f"postings for {term!r}: expected {df} entries")
            dictionary[term] = PostingList(np.cumsum(values[0::2]), values[1::2].copy())

        doclen = data["doclen.bin"]
        pos = _check_header("doclen.bin", doclen)
        (n_docs,) = struct.unpack_from("<Q", doclen, pos)
        pos += 8
        doc_lengths = np.frombuffer(doclen, dtype="<u4", count=n_docs, offset=pos).astype(np.int64)

        doc_ids = []
        for i, line in enumerate(data["docids.tsv"].decode("utf-8").splitlines()):
            ordinal, doc_id = line.split("\t", 1)
            if int(ordinal) != i:
                raise IndexFormatError(f"docids.tsv: ordinal {ordinal} out of order")
            doc_ids.append(doc_id)
    except (struct.error, ValueError, UnicodeDecodeError) as exc:
        raise IndexFormatError(f"corrupt index in {root}: {exc}") from None

    s = meta["stats"]
    stats = IndexStats(int(s["doc_count"]), float(s["avg_doc_len"]), int(s["total_tokens"]))
    index = InvertedIndex(dictionary, doc_lengths, doc_ids, stats, meta["tokenizer_fingerprint"],
                          meta.get("tokenizer", {}), bool(meta.get("include_title", True)))
    if verify:
        index.check_consistency()
    return index
