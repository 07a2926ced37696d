"""Corpus ingestion, text normalization, and stop-word handling.

Everything downstream (graph extraction, embedding) consumes the token
streams produced here, so normalization is deliberately rule-based and
deterministic: identical input text always yields identical tokens.
"""

from __future__ import annotations

import csv
import json
import logging
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterator

logger = logging.getLogger(__name__)

DEFAULT_MIN_TOKEN_LEN = 2

# A token is a run of alphanumerics, optionally joined by internal hyphens,
# so domain terms like "sars-cov-2" survive as single tokens.
_TOKEN_RE = re.compile(r"[a-z0-9]+(?:-[a-z0-9]+)*")

_SENTENCE_PUNCT_RE = re.compile(r"[.!?]+")

# Common abbreviations that end with '.' but do not end a sentence.
_ABBREVIATIONS = (
    "et al.",
    "e.g.",
    "i.e.",
    "cf.",
    "ca.",
    "vs.",
    "fig.",
    "figs.",
    "eq.",
    "eqs.",
    "ref.",
    "refs.",
    "no.",
    "nos.",
    "vol.",
    "dr.",
    "prof.",
    "st.",
)


@dataclass(frozen=True)
class Document:
    """One corpus record. At least one of title/abstract/body is non-empty."""

    doc_id: str
    title: str = ""
    abstract: str = ""
    body: str = ""
    doi: str | None = None
    journal: str | None = None
    year: int | None = None

    def __post_init__(self) -> None:
        if not self.doc_id:
            raise ValueError("doc_id must be non-empty")
        if not (self.title or self.abstract or self.body):
            raise ValueError(f"document {self.doc_id!r} has no text")


@dataclass(frozen=True)
class Token:
    surface: str
    is_stopword: bool
    sentence_index: int
    position: int


@dataclass
class TokenStream:
    doc_id: str
    sentences: list[list[Token]] = field(default_factory=list)

    def surfaces(self) -> list[str]:
        """Flat token surfaces in stream order."""
        return [t.surface for sent in self.sentences for t in sent]


@dataclass(frozen=True)
class StopwordList:
    """Standard English plus scientific-boilerplate stop words.

    All entries are lowercase, so membership tests against normalized
    tokens are effectively case-insensitive.
    """

    standard: frozenset[str]
    scientific: frozenset[str]

    def __contains__(self, word: str) -> bool:
        return word in self.standard or word in self.scientific

    def __len__(self) -> int:
        return len(self.standard | self.scientific)


def read_stopword_file(path: Path | str) -> frozenset[str]:
    """Read a stop-word file: UTF-8, one lowercase token per line, # comments."""
    words: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            entry = line.strip()
            if entry and not entry.startswith("#"):
                words.add(entry.lower())
    return frozenset(words)


def load_stopwords(
    standard_path: Path | str | None = None,
    scientific_path: Path | str | None = None,
) -> StopwordList:
    """Load stop-word lists, defaulting to the lists shipped with the package."""
    data = resources.files("litexplore").joinpath("data")
    if standard_path is None:
        standard_path = str(data.joinpath("stopwords_standard.txt"))
    if scientific_path is None:
        scientific_path = str(data.joinpath("stopwords_scientific.txt"))
    return StopwordList(
        standard=read_stopword_file(standard_path),
        scientific=read_stopword_file(scientific_path),
    )


def _ends_with_abbreviation(text: str, end: int) -> bool:
    head = text[:end].lower()
    for abbr in _ABBREVIATIONS:
        if head.endswith(abbr):
            before = head[-len(abbr) - 1 : -len(abbr)]
            if not before or not before.isalpha():
                return True
    return False


def split_sentences(text: str) -> list[str]:
    """Rule-based sentence split.

    A boundary is {., !, ?} followed by whitespace and a capital letter,
    or end of text; known abbreviations ("et al.", "Fig.", ...) never end
    a sentence.
    """
    sentences: list[str] = []
    start = 0
    for match in _SENTENCE_PUNCT_RE.finditer(text):
        follow = text[match.end() :]
        stripped = follow.lstrip()
        if stripped:
            if len(stripped) == len(follow):
                continue  # no whitespace after the punctuation run
            if not stripped[0].isupper():
                continue
        if _ends_with_abbreviation(text, match.end()):
            continue
        segment = text[start : match.end()].strip()
        if segment:
            sentences.append(segment)
        start = match.end()
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def normalize_sentences(
    text: str, min_token_len: int = DEFAULT_MIN_TOKEN_LEN
) -> list[list[str]]:
    """Sentence-split and normalize text into lowercase surface tokens.

    Tokens shorter than ``min_token_len`` and purely numeric standalone
    tokens are dropped; hyphenated tokens are exempt from the numeric
    rule so "covid-19" survives. Sentences that lose all their tokens
    stay in the result as empty lists.
    """
    normalized: list[list[str]] = []
    for raw in split_sentences(text):
        tokens = [
            tok
            for tok in _TOKEN_RE.findall(raw.lower())
            if len(tok) >= min_token_len and not tok.isdigit()
        ]
        normalized.append(tokens)
    return normalized


def tokenize(
    doc: Document,
    stopwords: StopwordList,
    min_token_len: int = DEFAULT_MIN_TOKEN_LEN,
) -> TokenStream:
    """Tokenize title + abstract + body into a stop-word-flagged stream.

    Stop words are retained in the stream (connective detection needs
    them); graph construction is what skips them.
    """
    sentences: list[list[Token]] = []
    for field_text in (doc.title, doc.abstract, doc.body):
        if not field_text:
            continue
        for surfaces in normalize_sentences(field_text, min_token_len):
            sent_idx = len(sentences)
            sentences.append(
                [
                    Token(
                        surface=surf,
                        is_stopword=surf in stopwords,
                        sentence_index=sent_idx,
                        position=pos,
                    )
                    for pos, surf in enumerate(surfaces)
                ]
            )
    return TokenStream(doc_id=doc.doc_id, sentences=sentences)


class CorpusLoader:
    """Streaming iterator over corpus records.

    Malformed records are skipped and counted in ``skipped`` (final once
    iteration completes). Memory use is bounded by one record for the
    jsonl format; the cord19 adapter additionally holds one full-text
    JSON file at a time.
    """

    def __init__(self, path: Path | str, format: str = "jsonl") -> None:
        if format not in ("jsonl", "cord19"):
            raise ValueError(f"unknown corpus format: {format!r}")
        self.path = Path(path)
        self.format = format
        self.skipped = 0
        if not self.path.exists():
            raise FileNotFoundError(f"corpus path does not exist: {self.path}")

    def __iter__(self) -> Iterator[Document]:
        if self.format == "jsonl":
            yield from self._iter_jsonl()
        else:
            yield from self._iter_cord19()

    def _skip(self, reason: str) -> None:
        self.skipped += 1
        logger.warning("skipping record: %s", reason)

    def _iter_jsonl(self) -> Iterator[Document]:
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError:
                    self._skip(f"line {lineno}: invalid JSON")
                    continue
                doc = self._record_to_document(record, f"line {lineno}")
                if doc is not None:
                    yield doc

    def _record_to_document(self, record: object, where: str) -> Document | None:
        if not isinstance(record, dict):
            self._skip(f"{where}: not an object")
            return None
        doc_id = record.get("doc_id")
        if not isinstance(doc_id, str) or not doc_id:
            self._skip(f"{where}: missing doc_id")
            return None
        title = record.get("title") or ""
        abstract = record.get("abstract") or ""
        body = record.get("body") or ""
        if not (title or abstract or body):
            self._skip(f"{where}: record {doc_id!r} has no text fields")
            return None
        year = record.get("year")
        if isinstance(year, str) and year.isdigit():
            year = int(year)
        if not isinstance(year, int):
            year = None
        return Document(
            doc_id=doc_id,
            title=str(title),
            abstract=str(abstract),
            body=str(body),
            doi=record.get("doi") or None,
            journal=record.get("journal") or None,
            year=year,
        )

    def _iter_cord19(self) -> Iterator[Document]:
        base_dir = self.path.parent
        with open(self.path, encoding="utf-8", newline="") as fh:
            for row_no, row in enumerate(csv.DictReader(fh), start=1):
                doc_id = (row.get("cord_uid") or "").strip()
                if not doc_id:
                    self._skip(f"metadata row {row_no}: missing cord_uid")
                    continue
                title = (row.get("title") or "").strip()
                abstract = (row.get("abstract") or "").strip()
                body = self._read_cord19_body(row.get("pdf_json_files") or "", base_dir)
                if not (title or abstract or body):
                    self._skip(f"metadata row {row_no}: {doc_id!r} has no text")
                    continue
                publish_time = (row.get("publish_time") or "").strip()
                year = int(publish_time[:4]) if publish_time[:4].isdigit() else None
                yield Document(
                    doc_id=doc_id,
                    title=title,
                    abstract=abstract,
                    body=body,
                    doi=(row.get("doi") or "").strip() or None,
                    journal=(row.get("journal") or "").strip() or None,
                    year=year,
                )

    def _read_cord19_body(self, pdf_json_files: str, base_dir: Path) -> str:
        for rel in pdf_json_files.split(";"):
            rel = rel.strip()
            if not rel:
                continue
            full_path = base_dir / rel
            try:
                with open(full_path, encoding="utf-8") as fh:
                    parsed = json.load(fh)
            except (OSError, json.JSONDecodeError):
                logger.warning("unreadable full-text file: %s", full_path)
                continue
            paragraphs = [
                block.get("text", "")
                for block in parsed.get("body_text", [])
                if block.get("text")
            ]
            if paragraphs:
                return "\n".join(paragraphs)
        return ""


def load_corpus(path: Path | str, format: str = "jsonl") -> CorpusLoader:
    """Open a corpus for streaming iteration.

    Returns a loader that yields one Document per well-formed record;
    inspect ``loader.skipped`` after iteration for the malformed count.
    """
    return CorpusLoader(path, format)


def document_to_record(doc: Document) -> dict:
    """Native JSON Lines record for a document (absent optionals are null)."""
    return {
        "doc_id": doc.doc_id,
        "title": doc.title,
        "abstract": doc.abstract,
        "body": doc.body,
        "doi": doc.doi,
        "journal": doc.journal,
        "year": doc.year,
    }
