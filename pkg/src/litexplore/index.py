"""Keyphrase inverted index: Boolean search, ranking, and autosuggest.

Postings map keyphrase text to (doc_id, score) pairs sorted by score
descending. Query aggregation: AND takes the intersection with the mean
of per-term scores; OR takes the union with the mean over matched terms
scaled by coverage (matched / total terms), which keeps scores in [0, 1]
and prefers documents matching more of the query.
"""

from __future__ import annotations

import json
from bisect import bisect_left
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .corpus import Document

MAX_LIMIT = 50
MAX_TERMS = 10
MAX_TERM_LEN = 64

INDEX_VERSION = 1


@dataclass
class DocMeta:
    title: str
    doi: str | None
    journal: str | None
    year: int | None
    keyphrases: list[tuple[str, float]]  # (text, score), score descending


@dataclass
class KeyphraseIndex:
    postings: dict[str, list[tuple[str, float]]] = field(default_factory=dict)
    vocabulary: list[str] = field(default_factory=list)
    doc_meta: dict[str, DocMeta] = field(default_factory=dict)

    def doc_count(self, term: str) -> int:
        return len(self.postings.get(term, ()))


@dataclass
class Query:
    terms: list[str]
    operator: str = "and"
    limit: int = MAX_LIMIT

    def validate(self) -> None:
        if not self.terms:
            raise ValueError("query needs at least one term")
        if len(self.terms) > MAX_TERMS:
            raise ValueError(f"query limited to {MAX_TERMS} terms")
        for term in self.terms:
            if not term:
                raise ValueError("empty query term")
            if term != term.lower():
                raise ValueError(f"term not lowercased: {term!r}")
            if len(term) > MAX_TERM_LEN:
                raise ValueError(f"term longer than {MAX_TERM_LEN} characters")
        if self.operator not in ("and", "or"):
            raise ValueError(f"unknown operator: {self.operator!r}")
        if not 1 <= self.limit <= MAX_LIMIT:
            raise ValueError(f"limit must be in [1, {MAX_LIMIT}]")


@dataclass
class SearchHit:
    doc_id: str
    score: float
    per_term: dict[str, float]
    title: str = ""
    doi: str | None = None
    journal: str | None = None
    year: int | None = None


def build_index(
    keyphrase_records: Iterable[dict], documents: Iterable[Document]
) -> KeyphraseIndex:
    """Assemble the index from keyphrase dump records and document metadata.

    Records follow the dump format: {doc_id, keyphrases: [{text, score}]}.
    A keyphrase listed twice for one document keeps its maximum score; a
    record naming an unknown doc_id is rejected.
    """
    index = KeyphraseIndex()
    for doc in documents:
        index.doc_meta[doc.doc_id] = DocMeta(
            title=doc.title,
            doi=doc.doi,
            journal=doc.journal,
            year=doc.year,
            keyphrases=[],
        )

    per_doc_scores: dict[str, dict[str, float]] = {}
    for record in keyphrase_records:
        doc_id = record["doc_id"]
        if doc_id not in index.doc_meta:
            raise ValueError(f"keyphrases reference unknown doc_id: {doc_id!r}")
        scores = per_doc_scores.setdefault(doc_id, {})
        for entry in record["keyphrases"]:
            text, score = entry["text"], float(entry["score"])
            if not 0.0 <= score <= 1.0:
                raise ValueError(f"score out of range for {text!r}: {score}")
            if score > scores.get(text, -1.0):
                scores[text] = score

    for doc_id, scores in per_doc_scores.items():
        index.doc_meta[doc_id].keyphrases = sorted(
            scores.items(), key=lambda item: (-item[1], item[0])
        )
        for text, score in scores.items():
            index.postings.setdefault(text, []).append((doc_id, score))

    for text in index.postings:
        index.postings[text].sort(key=lambda entry: (-entry[1], entry[0]))
    index.vocabulary = sorted(index.postings)
    return index


def search(index: KeyphraseIndex, query: Query) -> list[SearchHit]:
    """Evaluate a Boolean keyphrase query, ranked by aggregated score.

    Unknown terms contribute empty postings, so an AND query containing
    one yields no results. Ordering is score descending with doc_id
    ascending ties, truncated to the query limit.
    """
    query.validate()
    term_postings = {term: dict(index.postings.get(term, ())) for term in query.terms}

    doc_terms: dict[str, dict[str, float]] = {}
    for term, postings in term_postings.items():
        for doc_id, score in postings.items():
            doc_terms.setdefault(doc_id, {})[term] = score

    n_terms = len(query.terms)
    hits = []
    for doc_id, matched in doc_terms.items():
        if query.operator == "and":
            if len(matched) != len(set(query.terms)):
                continue
            score = sum(matched.values()) / len(matched)
        else:
            score = (sum(matched.values()) / len(matched)) * (len(matched) / n_terms)
        meta = index.doc_meta.get(doc_id)
        hits.append(
            SearchHit(
                doc_id=doc_id,
                score=min(1.0, max(0.0, score)),
                per_term=dict(sorted(matched.items())),
                title=meta.title if meta else "",
                doi=meta.doi if meta else None,
                journal=meta.journal if meta else None,
                year=meta.year if meta else None,
            )
        )
    hits.sort(key=lambda hit: (-hit.score, hit.doc_id))
    return hits[: min(query.limit, MAX_LIMIT)]


def autosuggest(index: KeyphraseIndex, prefix: str, k: int) -> list[str]:
    """Up to k keyphrases with the given prefix, by (doc count desc, text asc).

    An empty prefix returns the top-k phrases by document count.
    """
    if k <= 0:
        return []
    vocab = index.vocabulary
    if prefix:
        start = bisect_left(vocab, prefix)
        end = start
        while end < len(vocab) and vocab[end].startswith(prefix):
            end += 1
        candidates = vocab[start:end]
    else:
        candidates = vocab
    ordered = sorted(candidates, key=lambda text: (-index.doc_count(text), text))
    return ordered[:k]


def journal_histogram(hits: list[SearchHit]) -> dict[str, int]:
    """Hit counts per journal; hits without a journal count as "unknown"."""
    histogram: dict[str, int] = {}
    for hit in hits:
        journal = hit.journal or "unknown"
        histogram[journal] = histogram.get(journal, 0) + 1
    return histogram


def save_index(index: KeyphraseIndex, path: Path | str) -> None:
    payload = {
        "version": INDEX_VERSION,
        "postings": {
            text: [[doc_id, score] for doc_id, score in entries]
            for text, entries in sorted(index.postings.items())
        },
        "doc_meta": {
            doc_id: {
                "title": meta.title,
                "doi": meta.doi,
                "journal": meta.journal,
                "year": meta.year,
                "keyphrases": [[text, score] for text, score in meta.keyphrases],
            }
            for doc_id, meta in sorted(index.doc_meta.items())
        },
    }
    Path(path).write_text(
        json.dumps(payload, sort_keys=True, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )


def load_index(path: Path | str) -> KeyphraseIndex:
    """Load and validate a persisted index; invariant violations raise."""
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("version") != INDEX_VERSION:
        raise ValueError(f"unsupported index version: {payload.get('version')!r}")
    index = KeyphraseIndex()
    for doc_id, meta in payload["doc_meta"].items():
        index.doc_meta[doc_id] = DocMeta(
            title=meta["title"],
            doi=meta["doi"],
            journal=meta["journal"],
            year=meta["year"],
            keyphrases=[(text, float(score)) for text, score in meta["keyphrases"]],
        )
    for text, entries in payload["postings"].items():
        postings = [(doc_id, float(score)) for doc_id, score in entries]
        for doc_id, score in postings:
            if not 0.0 <= score <= 1.0:
                raise ValueError(f"posting score out of range: {text!r} -> {score}")
            if doc_id not in index.doc_meta:
                raise ValueError(f"posting references unknown doc_id: {doc_id!r}")
        if postings != sorted(postings, key=lambda entry: (-entry[1], entry[0])):
            raise ValueError(f"posting list not sorted for {text!r}")
        index.postings[text] = postings
    index.vocabulary = sorted(index.postings)
    return index
