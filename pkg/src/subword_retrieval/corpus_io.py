"""Readers and writers for the corpus, topic and qrels interchange formats.

Corpus: UTF-8 JSONL, one ``{"id", "title", "text"}`` object per line.
Queries: UTF-8 TSV ``qid<TAB>text``.
Qrels: whitespace separated ``qid 0 docid grade`` (TREC).
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import DuplicateIdError, FormatError


@dataclass(frozen=True)
class Document:
    doc_id: str
    title: str
    body: str

    def indexed_text(self, include_title: bool = True) -> str:
        if include_title:
            return self.title + "\n" + self.body
        return self.body


@dataclass(frozen=True)
class Query:
    query_id: str
    text: str


class QrelsWarning(UserWarning):
    pass


@dataclass
class Qrels:
    """Relevance judgments: query_id -> {doc_id: grade}."""

    judgments: dict[str, dict[str, int]] = field(default_factory=dict)

    def relevant(self, query_id: str, rel_threshold: int = 1) -> set[str]:
        grades = self.judgments.get(query_id, {})
        return {d for d, g in grades.items() if g >= rel_threshold}

    def add(self, query_id: str, doc_id: str, grade: int) -> bool:
        """Record a judgment; returns True when it replaced an earlier one."""
        per_query = self.judgments.setdefault(query_id, {})
        replaced = doc_id in per_query
        per_query[doc_id] = grade
        return replaced

    def __len__(self) -> int:
        return len(self.judgments)


def _decode(raw: bytes, path, line_no: int) -> str:
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError(f"invalid UTF-8 ({exc.reason})", path, line_no) from None


def _lines(path) -> Iterator[tuple[int, str]]:
    """Yield (1-based line number, decoded line without the newline)."""
    with open(path, "rb") as fh:
        for line_no, raw in enumerate(fh, start=1):
            yield line_no, _decode(raw, path, line_no).rstrip("\r\n")


def load_corpus(path) -> Iterator[Document]:
    """Stream documents from a JSONL file in file order.

    Blank lines are skipped. Only the ids seen so far are retained, so memory
    does not grow with document size.
    """
    seen: set[str] = set()
    for line_no, line in _lines(path):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FormatError(f"malformed JSON ({exc.msg})", path, line_no) from None
        if not isinstance(obj, dict):
            raise FormatError("expected a JSON object", path, line_no)
        doc_id = obj.get("id")
        title = obj.get("title", "")
        text = obj.get("text")
        if not isinstance(doc_id, str) or not doc_id:
            raise FormatError("field 'id' must be a non-empty string", path, line_no)
        if not isinstance(title, str) or not isinstance(text, str):
            raise FormatError("fields 'title' and 'text' must be strings", path, line_no)
        if doc_id in seen:
            raise DuplicateIdError(doc_id, path, line_no, kind="document id")
        seen.add(doc_id)
        yield Document(doc_id, title, text)


def write_corpus(docs: Iterable[Document], path) -> int:
    n = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for doc in docs:
            record = {"id": doc.doc_id, "title": doc.title, "text": doc.body}
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
            n += 1
    return n


def load_queries(path) -> list[Query]:
    queries = []
    seen: set[str] = set()
    for line_no, line in _lines(path):
        if not line.strip():
            continue
        if "\t" not in line:
            raise FormatError("expected 'query_id<TAB>text'", path, line_no)
        qid, text = line.split("\t", 1)
        if not qid:
            raise FormatError("empty query id", path, line_no)
        if qid in seen:
            raise DuplicateIdError(qid, path, line_no, kind="query id")
        seen.add(qid)
        queries.append(Query(qid, text))
    return queries


def write_queries(queries: Iterable[Query], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for q in queries:
            fh.write(f"{q.query_id}\t{q.text}\n")


def load_qrels(path) -> Qrels:
    """Parse TREC qrels. A repeated (query, doc) pair keeps the later grade and warns."""
    qrels = Qrels()
    for line_no, line in _lines(path):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 4:
            raise FormatError(f"expected 4 columns, got {len(parts)}", path, line_no)
        qid, _, doc_id, grade_str = parts
        try:
            grade = int(grade_str)
        except ValueError:
            raise FormatError(f"non-integer grade {grade_str!r}", path, line_no) from None
        if grade < 0:
            raise FormatError(f"negative grade {grade}", path, line_no)
        if qrels.add(qid, doc_id, grade):
            warnings.warn(
                f"{path}:{line_no}: duplicate judgment for ({qid}, {doc_id}); keeping grade {grade}",
                QrelsWarning,
                stacklevel=2,
            )
    return qrels


def write_qrels(qrels: Qrels, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for qid, grades in qrels.judgments.items():
            for doc_id, grade in grades.items():
                fh.write(f"{qid} 0 {doc_id} {grade}\n")


def ensure_path(path) -> Path:
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"no such file: {p}")
    return p
