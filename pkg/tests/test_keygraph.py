import itertools
import random
from collections import Counter, deque
from concurrent.futures import ThreadPoolExecutor

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from litexplore.corpus import Document, StopwordList, Token, TokenStream
from litexplore.keygraph import (
    CentralityScores,
    ExtractionConfig,
    Keyphrase,
    TokenGraph,
    build_graph,
    detect_connectives,
    extract_document,
    extract_keyphrases,
    keyphrases_to_record,
    load_centrality,
    rank_tokens,
)

CONFIG = ExtractionConfig()


def stream_of(sentences, stops=frozenset(), doc_id="d"):
    """Build a TokenStream from lists of surfaces; stops flags stop words."""
    built = []
    for s_idx, surfaces in enumerate(sentences):
        built.append(
            [
                Token(surface=surf, is_stopword=surf in stops, sentence_index=s_idx, position=p)
                for p, surf in enumerate(surfaces)
            ]
        )
    return TokenStream(doc_id=doc_id, sentences=built)


def load_centrality_oracle(nodes, edges):
    """Independent oracle: enumerate every shortest path for every ordered
    pair, carrying flow that divides equally at each branching vertex, and
    credit the flow to intermediate nodes. Normalized by (n-1)(n-2)."""
    adjacency = {v: set() for v in nodes}
    for u, v in edges:
        adjacency[u].add(v)
        adjacency[v].add(u)

    def bfs(source):
        dist = {source: 0}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for w in adjacency[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    dist_from = {v: bfs(v) for v in nodes}
    load = {v: 0.0 for v in nodes}
    for s in nodes:
        for t in nodes:
            if s == t or t not in dist_from[s]:
                continue
            stack = [([s], 1.0)]
            while stack:
                path, flow = stack.pop()
                u = path[-1]
                if u == t:
                    for mid in path[1:-1]:
                        load[mid] += flow
                    continue
                nxt = [
                    w
                    for w in adjacency[u]
                    if dist_from[s].get(w) == dist_from[s][u] + 1
                    and dist_from[t].get(w, -2) == dist_from[t][u] - 1
                ]
                for w in nxt:
                    stack.append((path + [w], flow / len(nxt)))
    n = len(nodes)
    if n < 3:
        return {v: 0.0 for v in nodes}
    norm = (n - 1) * (n - 2)
    return {v: value / norm for v, value in load.items()}


class TestBuildGraph:
    def test_empty_stream(self):
        graph = build_graph(stream_of([]), CONFIG)
        assert graph.nodes == set()
        assert graph.edges == {}

    def test_consecutive_pairs(self):
        graph = build_graph(stream_of([["a", "b", "c", "a", "b"]]), CONFIG)
        assert graph.nodes == {"a", "b", "c"}
        assert graph.edges == {("a", "b"): 2, ("b", "c"): 1, ("c", "a"): 1}

    def test_stopword_skipped_in_distance(self):
        graph = build_graph(stream_of([["x", "the", "y"]], stops={"the"}), CONFIG)
        assert graph.edges == {("x", "y"): 1}
        assert graph.nodes == {"x", "y"}

    def test_edges_do_not_cross_sentences(self):
        graph = build_graph(stream_of([["a", "b"], ["c", "d"]]), CONFIG)
        assert set(graph.edges) == {("a", "b"), ("c", "d")}

    def test_isolated_content_token_is_a_node(self):
        graph = build_graph(stream_of([["solo"]]), CONFIG)
        assert graph.nodes == {"solo"}
        assert graph.edges == {}

    def test_no_self_loops(self):
        graph = build_graph(stream_of([["a", "a", "b"]]), CONFIG)
        assert ("a", "a") not in graph.edges

    def test_window_two(self):
        config = ExtractionConfig(window=2)
        graph = build_graph(stream_of([["a", "b", "c"]]), config)
        assert graph.edges == {("a", "b"): 1, ("a", "c"): 1, ("b", "c"): 1}


class TestLoadCentrality:
    def test_path_graph(self):
        graph = TokenGraph(doc_id="d", nodes={"a", "b", "c"}, edges={("a", "b"): 1, ("b", "c"): 1})
        scores = load_centrality(graph).scores
        assert scores == {"a": 0.0, "b": 1.0, "c": 0.0}

    def test_complete_graph_all_zero(self):
        nodes = {"a", "b", "c", "d"}
        edges = {pair: 1 for pair in itertools.combinations(sorted(nodes), 2)}
        scores = load_centrality(TokenGraph(doc_id="d", nodes=nodes, edges=edges)).scores
        assert all(value == 0.0 for value in scores.values())

    def test_star_graph(self):
        edges = {("c", leaf): 1 for leaf in ("l1", "l2", "l3")}
        graph = TokenGraph(doc_id="d", nodes={"c", "l1", "l2", "l3"}, edges=edges)
        scores = load_centrality(graph).scores
        assert scores["c"] == 1.0
        assert scores["l1"] == scores["l2"] == scores["l3"] == 0.0

    def test_small_graphs_all_zero(self):
        graph = TokenGraph(doc_id="d", nodes={"a", "b"}, edges={("a", "b"): 1})
        assert load_centrality(graph).scores == {"a": 0.0, "b": 0.0}

    def test_matches_oracle_on_random_graphs(self):
        rng = random.Random(42)
        for _ in range(60):
            n = rng.randint(3, 8)
            nodes = {f"n{i}" for i in range(n)}
            edges = {}
            for u, v in itertools.combinations(sorted(nodes), 2):
                if rng.random() < 0.5:
                    edges[(u, v)] = 1
            graph = TokenGraph(doc_id="d", nodes=nodes, edges=edges)
            mine = load_centrality(graph).scores
            expected = load_centrality_oracle(nodes, edges)
            for node in nodes:
                assert mine[node] == pytest.approx(expected[node], abs=1e-9)

    def test_scores_bounded(self):
        rng = random.Random(5)
        for _ in range(30):
            n = rng.randint(3, 8)
            nodes = {f"n{i}" for i in range(n)}
            edges = {
                (u, v): 1
                for u, v in itertools.combinations(sorted(nodes), 2)
                if rng.random() < 0.4
            }
            scores = load_centrality(TokenGraph(doc_id="d", nodes=nodes, edges=edges)).scores
            assert all(0.0 <= value <= 1.0 for value in scores.values())


class TestRankTokens:
    def test_empty(self):
        assert rank_tokens(CentralityScores(doc_id="d", scores={})) == []

    def test_tie_break_lexicographic(self):
        scores = CentralityScores(doc_id="d", scores={"b": 0.5, "a": 0.5, "c": 0.9})
        assert rank_tokens(scores) == [("c", 0.9), ("a", 0.5), ("b", 0.5)]

    def test_path_graph_ranks_middle_first(self):
        graph = TokenGraph(doc_id="d", nodes={"a", "b", "c"}, edges={("a", "b"): 1, ("b", "c"): 1})
        assert rank_tokens(load_centrality(graph)) == [("b", 1.0), ("a", 0.0), ("c", 0.0)]


def brute_force_keyphrases(stream, ranked, config):
    """Exhaustive candidate enumeration mirroring the documented rules,
    written as plain position scans independent of the implementation."""
    centrality = dict(ranked)
    sents = [[t.surface for t in s if not t.is_stopword] for s in stream.sentences]
    flat = [tok for s in sents for tok in s]
    if not flat:
        return []
    occurrences = Counter(flat)

    ordered_counts = {2: Counter(), 3: Counter()}
    for s in sents:
        for size in (2, 3):
            for i in range(len(s) - size + 1):
                gram = tuple(s[i : i + size])
                if len(set(gram)) == size:
                    ordered_counts[size][gram] += 1

    candidates = {}
    for size in (2, 3):
        by_set = {}
        for gram in sorted(ordered_counts[size]):
            count = ordered_counts[size][gram]
            key = frozenset(gram)
            if key not in by_set or count > by_set[key][1]:
                by_set[key] = (gram, count)
        for gram, count in by_set.values():
            if count / min(occurrences[t] for t in gram) >= config.merge_threshold:
                score = sum(centrality.get(t, 0.0) for t in gram) / size
                candidates[gram] = min(1.0, max(0.0, score))

    ordered = sorted(candidates.items(), key=lambda kv: (-kv[1], " ".join(kv[0])))
    kept, used = [], set()
    for gram, score in ordered:
        if len(kept) >= config.top_k:
            break
        if used & set(gram):
            continue
        kept.append((gram, score))
        used |= set(gram)
    pool = kept + [
        ((tok,), min(1.0, max(0.0, centrality.get(tok, 0.0))))
        for tok in occurrences
        if tok not in used
    ]
    pool.sort(key=lambda kv: (-kv[1], " ".join(kv[0])))
    return [(gram, score) for gram, score in pool[: config.top_k]]


class TestExtractKeyphrases:
    def _ranked(self, stream, config=CONFIG):
        return rank_tokens(load_centrality(build_graph(stream, config)))

    def test_repeated_bigram_suppresses_unigrams(self):
        stream = stream_of([["alpha", "beta", "alpha", "beta"]])
        ranked = self._ranked(stream)
        phrases = extract_keyphrases(stream, ranked, CONFIG)
        texts = [p.text for p in phrases]
        assert "alpha beta" in texts
        assert "alpha" not in texts and "beta" not in texts
        bigram = next(p for p in phrases if p.text == "alpha beta")
        expected = (dict(ranked)["alpha"] + dict(ranked)["beta"]) / 2
        assert bigram.score == pytest.approx(expected)

    def test_single_content_token(self):
        stream = stream_of([["only"]])
        ranked = [("only", 0.0)]
        phrases = extract_keyphrases(stream, ranked, CONFIG)
        assert [p.tokens for p in phrases] == [("only",)]

    def test_trigram_vs_bigram_competition(self):
        stream = stream_of([["a", "b", "c", "a", "b", "c"]])
        ranked = self._ranked(stream)
        phrases = extract_keyphrases(stream, ranked, CONFIG)
        expected = brute_force_keyphrases(stream, ranked, CONFIG)
        assert [(p.tokens, pytest.approx(p.score)) for p in phrases] == [
            (gram, pytest.approx(score)) for gram, score in expected
        ]
        # equal means: the bigram "a b" wins the tie lexicographically,
        # so the trigram (sharing members) is suppressed
        texts = [p.text for p in phrases]
        assert "a b" in texts and "a b c" not in texts

    def test_matches_brute_force_on_random_streams(self):
        rng = random.Random(99)
        vocab = ["tok%d" % i for i in range(8)]
        for _ in range(40):
            sentences = [
                [rng.choice(vocab) for _ in range(rng.randint(1, 12))]
                for _ in range(rng.randint(1, 4))
            ]
            stream = stream_of(sentences)
            config = ExtractionConfig(top_k=rng.choice([2, 5, 20]))
            ranked = self._ranked(stream, config)
            mine = extract_keyphrases(stream, ranked, config)
            expected = brute_force_keyphrases(stream, ranked, config)
            assert [(p.tokens, pytest.approx(p.score)) for p in mine] == [
                (gram, pytest.approx(score)) for gram, score in expected
            ]

    def test_returns_all_when_fewer_than_top_k(self):
        stream = stream_of([["x", "y"]])
        phrases = extract_keyphrases(stream, self._ranked(stream), CONFIG)
        assert 0 < len(phrases) <= CONFIG.top_k


class TestDetectConnectives:
    def _bigram(self, u, w, score=0.5):
        return Keyphrase(doc_id="d", tokens=(u, w), score=score)

    def test_connective_emitted(self):
        sentences = [["covid", "in", "usa"]] * 3
        stream = stream_of(sentences, stops={"in"})
        variants = detect_connectives(stream, [self._bigram("covid", "usa")], CONFIG)
        assert len(variants) == 1
        assert variants[0].text == "covid in usa"
        assert variants[0].connective == "in"
        assert variants[0].connective_position == 1
        assert variants[0].score == 0.5

    def test_adjacent_only_no_connective(self):
        stream = stream_of([["covid", "usa"]] * 4)
        variants = detect_connectives(stream, [self._bigram("covid", "usa")], CONFIG)
        assert variants == []

    def test_competing_connectives_min_count_filters(self):
        sentences = [["covid", "in", "usa"]] * 3 + [["covid", "of", "usa"]]
        stream = stream_of(sentences, stops={"in", "of"})
        variants = detect_connectives(stream, [self._bigram("covid", "usa")], CONFIG)
        assert [v.connective for v in variants] == ["in"]

    def test_non_stopword_middle_not_a_connective(self):
        stream = stream_of([["covid", "new", "usa"]] * 3)
        variants = detect_connectives(stream, [self._bigram("covid", "usa")], CONFIG)
        assert variants == []

    def test_fraction_threshold(self):
        # connective present twice but swamped by direct adjacency
        sentences = [["covid", "in", "usa"]] * 2 + [["covid", "usa"]] * 8
        stream = stream_of(sentences, stops={"in"})
        config = ExtractionConfig(merge_threshold=0.3)
        variants = detect_connectives(stream, [self._bigram("covid", "usa")], config)
        assert variants == []  # 2/10 < 0.3


class TestExtractDocument:
    def test_all_stopwords_document(self, stopwords):
        doc = Document(doc_id="d", title="The of and with", abstract="", body="")
        assert extract_document(doc, stopwords, CONFIG) == []

    def test_fixture_phrase_ranks_above_generic_unigram(self, stopwords):
        text = (
            "The spike protein binds the receptor. "
            "Spike protein variants alter receptor binding. "
            "Binding of the spike protein controls entry. "
            "Receptor studies isolate the spike protein domain."
        )
        doc = Document(doc_id="d", title="", abstract=text, body="")
        phrases = extract_document(doc, stopwords, CONFIG)
        texts = [p.text for p in phrases]
        assert "spike protein" in texts
        spike = texts.index("spike protein")
        generic = [texts.index(t) for t in ("entry", "domain") if t in texts]
        assert generic and all(spike < g for g in generic)

    def test_deterministic(self, stopwords):
        doc = Document(
            doc_id="d",
            title="Spike protein binding",
            abstract="The spike protein binds the receptor in cells.",
            body="Receptor binding controls viral entry. The spike protein mediates fusion.",
        )
        first = extract_document(doc, stopwords, CONFIG)
        second = extract_document(doc, stopwords, CONFIG)
        assert first == second

    def test_identical_documents_identical_phrases(self, stopwords):
        doc_a = Document(doc_id="a", title="spike protein receptor binding")
        doc_b = Document(doc_id="b", title="spike protein receptor binding")
        phrases_a = extract_document(doc_a, stopwords, CONFIG)
        phrases_b = extract_document(doc_b, stopwords, CONFIG)
        assert [(p.tokens, p.score) for p in phrases_a] == [
            (p.tokens, p.score) for p in phrases_b
        ]

    def test_parallel_matches_sequential(self, stopwords, corpus60):
        docs = corpus60[:12]
        sequential = [extract_document(d, stopwords, CONFIG) for d in docs]
        with ThreadPoolExecutor(max_workers=4) as pool:
            parallel = list(
                pool.map(lambda d: extract_document(d, stopwords, CONFIG), docs)
            )
        assert sequential == parallel

    def test_dump_record_shape(self, stopwords):
        doc = Document(doc_id="d9", title="spike protein spike protein")
        phrases = extract_document(doc, stopwords, CONFIG)
        record = keyphrases_to_record("d9", phrases)
        assert record["doc_id"] == "d9"
        for entry in record["keyphrases"]:
            assert set(entry) == {"text", "connective_position", "score"}


token_lists = st.lists(
    st.lists(
        st.sampled_from(["red", "blue", "green", "of", "the", "with", "node", "edge"]),
        min_size=0,
        max_size=10,
    ),
    min_size=0,
    max_size=4,
)


@settings(max_examples=100, deadline=None)
@given(token_lists)
def test_extraction_invariants(sentences):
    stops = {"of", "the", "with"}
    stream = stream_of(sentences, stops=stops)
    graph = build_graph(stream, CONFIG)
    ranked = rank_tokens(load_centrality(graph))
    phrases = extract_keyphrases(stream, ranked, CONFIG)
    phrases += detect_connectives(
        stream, [p for p in phrases if len(p.tokens) == 2], CONFIG
    )
    ngram_members = {t for p in phrases if len(p.tokens) > 1 for t in p.tokens}
    for phrase in phrases:
        assert 0.0 <= phrase.score <= 1.0
        for token in phrase.tokens:
            assert token not in stops
        if len(phrase.tokens) == 1:
            assert phrase.tokens[0] not in ngram_members
        if phrase.connective is not None:
            assert phrase.connective in stops
