import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from litexplore.corpus import Document
from litexplore.index import (
    MAX_LIMIT,
    DocMeta,
    KeyphraseIndex,
    Query,
    SearchHit,
    autosuggest,
    build_index,
    journal_histogram,
    load_index,
    save_index,
    search,
)


def doc(doc_id, journal=None, **kwargs):
    return Document(doc_id=doc_id, title=f"Title {doc_id}", journal=journal, **kwargs)


def record(doc_id, phrases):
    return {
        "doc_id": doc_id,
        "keyphrases": [{"text": t, "score": s} for t, s in phrases],
    }


def naive_search(doc_phrases, terms, operator, limit):
    """Independent scan over {doc_id: {text: score}} applying the stated
    aggregation: AND = mean of per-term scores over full matches; OR =
    mean over matched terms scaled by coverage."""
    hits = []
    for doc_id, phrases in doc_phrases.items():
        matched = {t: phrases[t] for t in set(terms) if t in phrases}
        if operator == "and":
            if len(matched) != len(set(terms)):
                continue
            score = sum(matched.values()) / len(matched)
        else:
            if not matched:
                continue
            score = (sum(matched.values()) / len(matched)) * (len(matched) / len(terms))
        hits.append((doc_id, score))
    hits.sort(key=lambda pair: (-pair[1], pair[0]))
    return hits[: min(limit, MAX_LIMIT)]


class TestBuildIndex:
    def test_empty(self):
        index = build_index([], [])
        assert index.postings == {}
        assert index.vocabulary == []

    def test_posting_sorted_by_score(self):
        index = build_index(
            [
                record("hi", [("spike protein", 0.7)]),
                record("lo", [("spike protein", 0.4)]),
            ],
            [doc("hi"), doc("lo")],
        )
        assert index.postings["spike protein"] == [("hi", 0.7), ("lo", 0.4)]

    def test_duplicate_keeps_max(self):
        index = build_index(
            [record("d", [("phrase", 0.3), ("phrase", 0.6)])], [doc("d")]
        )
        assert index.postings["phrase"] == [("d", 0.6)]

    def test_unknown_doc_rejected(self):
        with pytest.raises(ValueError, match="unknown doc_id"):
            build_index([record("ghost", [("x", 0.5)])], [doc("real")])

    def test_vocabulary_sorted(self):
        index = build_index(
            [record("d", [("zebra", 0.5), ("apple", 0.4), ("mango", 0.2)])], [doc("d")]
        )
        assert index.vocabulary == ["apple", "mango", "zebra"]

    def test_score_ties_break_by_doc_id(self):
        index = build_index(
            [record("b", [("p", 0.5)]), record("a", [("p", 0.5)])],
            [doc("a"), doc("b")],
        )
        assert index.postings["p"] == [("a", 0.5), ("b", 0.5)]


@pytest.fixture
def small_index():
    return build_index(
        [
            record("d1", [("p", 0.8), ("q", 0.4)]),
            record("d2", [("p", 0.2)]),
        ],
        [doc("d1", journal="J1"), doc("d2")],
    )


class TestSearch:
    def test_and_mean(self, small_index):
        hits = search(small_index, Query(terms=["p", "q"], operator="and"))
        assert [(h.doc_id, h.score) for h in hits] == [("d1", pytest.approx(0.6))]
        assert hits[0].per_term == {"p": 0.8, "q": 0.4}
        assert hits[0].title == "Title d1"

    def test_or_coverage_scaling(self, small_index):
        hits = search(small_index, Query(terms=["p", "q"], operator="or"))
        assert [(h.doc_id, h.score) for h in hits] == [
            ("d1", pytest.approx(0.6)),
            ("d2", pytest.approx(0.1)),
        ]

    def test_and_with_unknown_term_empty(self, small_index):
        assert search(small_index, Query(terms=["p", "nope"], operator="and")) == []

    def test_or_ignores_unknown_term_in_matching(self, small_index):
        hits = search(small_index, Query(terms=["p", "nope"], operator="or"))
        assert [h.doc_id for h in hits] == ["d1", "d2"]
        assert hits[0].score == pytest.approx(0.8 / 2)

    def test_empty_terms_invalid(self, small_index):
        with pytest.raises(ValueError):
            search(small_index, Query(terms=[], operator="and"))

    def test_limit_truncates(self, small_index):
        hits = search(small_index, Query(terms=["p"], operator="or", limit=1))
        assert len(hits) == 1

    def test_limit_over_cap_invalid(self, small_index):
        with pytest.raises(ValueError):
            search(small_index, Query(terms=["p"], limit=51))

    def test_uppercase_term_invalid(self, small_index):
        with pytest.raises(ValueError):
            search(small_index, Query(terms=["P"], operator="and"))


class TestAutosuggest:
    @pytest.fixture
    def vocab_index(self):
        return build_index(
            [
                record("d1", [("pandemic", 0.5), ("panel", 0.4)]),
                record("d2", [("pandemic", 0.3), ("pandemics", 0.6)]),
                record("d3", [("pandemics", 0.2), ("pandemic", 0.9)]),
            ],
            [doc("d1"), doc("d2"), doc("d3")],
        )

    def test_no_match(self, vocab_index):
        assert autosuggest(vocab_index, "zzz", 5) == []

    def test_prefix_ordering_by_doc_count(self, vocab_index):
        assert autosuggest(vocab_index, "pande", 5) == ["pandemic", "pandemics"]

    def test_k_one(self, vocab_index):
        assert autosuggest(vocab_index, "pande", 1) == ["pandemic"]

    def test_empty_prefix_top_by_count(self, vocab_index):
        assert autosuggest(vocab_index, "", 2) == ["pandemic", "pandemics"]

    def test_soundness_and_completeness(self, vocab_index):
        got = autosuggest(vocab_index, "pan", 2)
        assert all(text.startswith("pan") for text in got)
        counts = {t: vocab_index.doc_count(t) for t in vocab_index.vocabulary}
        floor = min(counts[t] for t in got)
        omitted = [
            t for t in vocab_index.vocabulary
            if t.startswith("pan") and t not in got
        ]
        assert all(counts[t] <= floor for t in omitted)


class TestJournalHistogram:
    def _hit(self, doc_id, journal):
        return SearchHit(doc_id=doc_id, score=0.5, per_term={}, journal=journal)

    def test_empty(self):
        assert journal_histogram([]) == {}

    def test_counts_with_unknown(self):
        hits = [self._hit(f"d{i}", "J") for i in range(3)] + [self._hit("d9", None)]
        assert journal_histogram(hits) == {"J": 3, "unknown": 1}

    def test_order_independent(self):
        hits = [self._hit("a", "X"), self._hit("b", None), self._hit("c", "X")]
        assert journal_histogram(hits) == journal_histogram(list(reversed(hits)))


phrase_names = st.sampled_from([f"kp{i}" for i in range(12)])
doc_names = st.sampled_from([f"doc{i}" for i in range(15)])


@st.composite
def index_and_query(draw):
    entries = draw(
        st.dictionaries(
            st.tuples(doc_names, phrase_names),
            st.floats(0.0, 1.0, allow_nan=False),
            min_size=1,
            max_size=60,
        )
    )
    doc_phrases = {}
    for (doc_id, text), score in entries.items():
        doc_phrases.setdefault(doc_id, {})[text] = score
    terms = draw(st.lists(phrase_names, min_size=1, max_size=4, unique=True))
    operator = draw(st.sampled_from(["and", "or"]))
    limit = draw(st.integers(1, MAX_LIMIT))
    return doc_phrases, terms, operator, limit


def build_from_doc_phrases(doc_phrases):
    records = [
        record(doc_id, sorted(phrases.items())) for doc_id, phrases in sorted(doc_phrases.items())
    ]
    return build_index(records, [doc(d) for d in sorted(doc_phrases)])


@settings(max_examples=150, deadline=None)
@given(index_and_query())
def test_search_matches_naive_scan(data):
    doc_phrases, terms, operator, limit = data
    index = build_from_doc_phrases(doc_phrases)
    hits = search(index, Query(terms=terms, operator=operator, limit=limit))
    expected = naive_search(doc_phrases, terms, operator, limit)
    assert [(h.doc_id, h.score) for h in hits] == [
        (doc_id, pytest.approx(score, abs=1e-12)) for doc_id, score in expected
    ]
    assert len(hits) <= min(limit, MAX_LIMIT)
    assert all(0.0 <= h.score <= 1.0 for h in hits)


@settings(max_examples=100, deadline=None)
@given(index_and_query())
def test_and_monotonicity(data):
    doc_phrases, terms, _operator, limit = data
    index = build_from_doc_phrases(doc_phrases)
    base = {
        h.doc_id
        for h in search(index, Query(terms=terms, operator="and", limit=MAX_LIMIT))
    }
    extended = {
        h.doc_id
        for h in search(
            index, Query(terms=terms + ["kp0"], operator="and", limit=MAX_LIMIT)
        )
    }
    if "kp0" not in terms:
        assert extended <= base


class TestPersistence:
    def test_round_trip(self, small_index, tmp_path):
        path = tmp_path / "index.json"
        save_index(small_index, path)
        loaded = load_index(path)
        assert loaded.postings == small_index.postings
        assert loaded.vocabulary == small_index.vocabulary
        assert loaded.doc_meta == small_index.doc_meta

    def test_load_rejects_bad_version(self, tmp_path):
        path = tmp_path / "index.json"
        path.write_text(json.dumps({"version": 99, "postings": {}, "doc_meta": {}}))
        with pytest.raises(ValueError, match="version"):
            load_index(path)

    def test_load_rejects_unsorted_postings(self, tmp_path):
        path = tmp_path / "index.json"
        payload = {
            "version": 1,
            "postings": {"p": [["a", 0.2], ["b", 0.9]]},
            "doc_meta": {
                "a": {"title": "", "doi": None, "journal": None, "year": None, "keyphrases": []},
                "b": {"title": "", "doi": None, "journal": None, "year": None, "keyphrases": []},
            },
        }
        path.write_text(json.dumps(payload))
        with pytest.raises(ValueError, match="not sorted"):
            load_index(path)

    def test_load_rejects_out_of_range_score(self, tmp_path):
        path = tmp_path / "index.json"
        payload = {
            "version": 1,
            "postings": {"p": [["a", 1.5]]},
            "doc_meta": {
                "a": {"title": "", "doi": None, "journal": None, "year": None, "keyphrases": []}
            },
        }
        path.write_text(json.dumps(payload))
        with pytest.raises(ValueError, match="out of range"):
            load_index(path)

    def test_load_rejects_unknown_doc(self, tmp_path):
        path = tmp_path / "index.json"
        payload = {"version": 1, "postings": {"p": [["ghost", 0.5]]}, "doc_meta": {}}
        path.write_text(json.dumps(payload))
        with pytest.raises(ValueError, match="unknown doc_id"):
            load_index(path)
