"""Per-document token graphs, load-centrality ranking, and keyphrase assembly.

The pipeline for one document: build a co-occurrence graph over content
tokens, rank nodes by load centrality (total shortest-path flow through a
node under equal splitting at branches), then backtrack to the token
stream to merge top tokens into two- and three-term keyphrases and to
detect stop-word connectives ("covid in usa").

Everything here is a pure function of (document text, stop-word lists,
config), so documents can be processed in parallel with no coordination.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field

from .corpus import Document, StopwordList, TokenStream, tokenize


@dataclass(frozen=True)
class ExtractionConfig:
    window: int = 1
    top_k: int = 20
    merge_threshold: float = 0.3
    connective_min_count: int = 2
    min_token_len: int = 2

    def __post_init__(self) -> None:
        if self.window < 1:
            raise ValueError("window must be positive")
        if self.top_k < 1:
            raise ValueError("top_k must be positive")
        if not 0.0 <= self.merge_threshold <= 1.0:
            raise ValueError("merge_threshold must be in [0, 1]")
        if self.connective_min_count < 1:
            raise ValueError("connective_min_count must be positive")


@dataclass
class TokenGraph:
    """Weighted co-occurrence graph over one document's content tokens.

    Edge keys preserve surface order; weights count co-occurrences.
    Stop words never appear as nodes and there are no self-loops.
    """

    doc_id: str
    nodes: set[str] = field(default_factory=set)
    edges: dict[tuple[str, str], int] = field(default_factory=dict)

    def undirected_adjacency(self) -> dict[str, list[str]]:
        adj: dict[str, set[str]] = {node: set() for node in self.nodes}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return {node: sorted(neigh) for node, neigh in adj.items()}


@dataclass
class CentralityScores:
    doc_id: str
    scores: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class Keyphrase:
    """1-3 content tokens, optionally with one stop-word connective.

    ``connective_position`` is the index of the connective within the
    rendered token sequence, always strictly between two content tokens.
    """

    doc_id: str
    tokens: tuple[str, ...]
    score: float
    connective: str | None = None
    connective_position: int | None = None

    def __post_init__(self) -> None:
        if not 1 <= len(self.tokens) <= 3:
            raise ValueError("keyphrase must have 1-3 content tokens")
        if self.connective is not None:
            if len(self.tokens) < 2:
                raise ValueError("connective requires at least 2 content tokens")
            if self.connective_position is None or not (
                1 <= self.connective_position <= len(self.tokens) - 1
            ):
                raise ValueError("connective must sit between content tokens")
        if not 0.0 <= self.score <= 1.0:
            raise ValueError("score must be in [0, 1]")

    @property
    def text(self) -> str:
        words = list(self.tokens)
        if self.connective is not None:
            words.insert(self.connective_position, self.connective)
        return " ".join(words)


def build_graph(stream: TokenStream, config: ExtractionConfig) -> TokenGraph:
    """Count co-occurrences between content tokens within ``config.window``.

    Distance is measured over non-stop-word positions only, so a stop
    word between two content tokens does not separate them. Edges never
    cross sentence boundaries and self-loops are skipped.
    """
    graph = TokenGraph(doc_id=stream.doc_id)
    for sentence in stream.sentences:
        content = [t.surface for t in sentence if not t.is_stopword]
        graph.nodes.update(content)
        for i, u in enumerate(content):
            for j in range(i + 1, min(i + config.window, len(content) - 1) + 1):
                v = content[j]
                if u == v:
                    continue
                graph.edges[(u, v)] = graph.edges.get((u, v), 0) + 1
    return graph


def load_centrality(graph: TokenGraph) -> CentralityScores:
    """Load centrality: total flow through each node when every ordered
    pair exchanges one unit along shortest paths, splitting equally at
    each branching vertex; normalized by (n-1)(n-2).

    Shortest paths are hop-count paths on the undirected view of the
    graph. Computed per source: each reachable node starts with its own
    unit, which is pushed back toward the source, dividing equally among
    shortest-path predecessors. That per-source pass equals forward
    equal-splitting for every pair directed at the source, so the sum
    over sources covers all ordered pairs.
    """
    nodes = sorted(graph.nodes)
    scores = {node: 0.0 for node in nodes}
    n = len(nodes)
    if n < 3:
        return CentralityScores(doc_id=graph.doc_id, scores=scores)

    adjacency = graph.undirected_adjacency()
    for source in nodes:
        dist: dict[str, int] = {source: 0}
        preds: dict[str, list[str]] = {}
        queue: deque[str] = deque([source])
        while queue:
            u = queue.popleft()
            for w in adjacency[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
                if dist[w] == dist[u] + 1:
                    preds.setdefault(w, []).append(u)
        between = {v: 1.0 for v in dist}
        for v in sorted(dist, key=lambda x: (-dist[x], x)):
            if v == source:
                continue
            share = between[v] / len(preds[v])
            for p in preds[v]:
                if p != source:
                    between[p] += share
        for v, value in between.items():
            if v != source:
                scores[v] += value - 1.0

    normalizer = float((n - 1) * (n - 2))
    return CentralityScores(
        doc_id=graph.doc_id,
        scores={node: value / normalizer for node, value in scores.items()},
    )


def rank_tokens(scores: CentralityScores) -> list[tuple[str, float]]:
    """Tokens by score descending; ties broken lexicographically."""
    return sorted(scores.scores.items(), key=lambda item: (-item[1], item[0]))


def _content_sentences(stream: TokenStream) -> list[list[str]]:
    return [
        [t.surface for t in sentence if not t.is_stopword]
        for sentence in stream.sentences
    ]


def _dominant_ngrams(
    ngram_counts: Counter, token_counts: Counter, threshold: float
) -> dict[frozenset, tuple[tuple[str, ...], int]]:
    """For each distinct token set, the most frequent surface order,
    kept only if it covers >= threshold of the rarest member's occurrences."""
    best: dict[frozenset, tuple[tuple[str, ...], int]] = {}
    for ngram, count in sorted(ngram_counts.items()):
        key = frozenset(ngram)
        if key not in best or count > best[key][1]:
            best[key] = (ngram, count)
    qualified = {}
    for key, (ngram, count) in best.items():
        rarest = min(token_counts[tok] for tok in ngram)
        if count / rarest >= threshold:
            qualified[key] = (ngram, count)
    return qualified


def extract_keyphrases(
    stream: TokenStream,
    ranked: list[tuple[str, float]],
    config: ExtractionConfig,
) -> list[Keyphrase]:
    """Merge ranked tokens into 1-3 term keyphrases by stream backtracking.

    An n-gram candidate is a run of distinct content tokens adjacent in
    the stop-word-filtered stream whose adjacency count reaches
    ``merge_threshold`` of its rarest member's occurrences; its score is
    the mean of the member centralities. Candidates are kept greedily by
    (score desc, text asc); a kept n-gram suppresses other candidates
    sharing any member token, including the member unigrams.
    """
    centrality = dict(ranked)
    sentences = _content_sentences(stream)
    token_counts: Counter = Counter(tok for sent in sentences for tok in sent)
    if not token_counts:
        return []

    bigram_counts: Counter = Counter()
    trigram_counts: Counter = Counter()
    for sent in sentences:
        for i in range(len(sent) - 1):
            pair = (sent[i], sent[i + 1])
            if len(set(pair)) == 2:
                bigram_counts[pair] += 1
        for i in range(len(sent) - 2):
            triple = (sent[i], sent[i + 1], sent[i + 2])
            if len(set(triple)) == 3:
                trigram_counts[triple] += 1

    def mean_score(tokens: tuple[str, ...]) -> float:
        value = sum(centrality.get(tok, 0.0) for tok in tokens) / len(tokens)
        return min(1.0, max(0.0, value))

    ngram_candidates: list[tuple[tuple[str, ...], float]] = []
    for counts in (bigram_counts, trigram_counts):
        for tokens, _count in _dominant_ngrams(
            counts, token_counts, config.merge_threshold
        ).values():
            ngram_candidates.append((tokens, mean_score(tokens)))

    ngram_candidates.sort(key=lambda c: (-c[1], " ".join(c[0])))
    kept: list[Keyphrase] = []
    used_tokens: set[str] = set()
    for tokens, score in ngram_candidates:
        if len(kept) >= config.top_k:
            break
        if used_tokens.intersection(tokens):
            continue
        kept.append(Keyphrase(doc_id=stream.doc_id, tokens=tokens, score=score))
        used_tokens.update(tokens)

    unigrams = [
        Keyphrase(doc_id=stream.doc_id, tokens=(tok,), score=mean_score((tok,)))
        for tok in token_counts
        if tok not in used_tokens
    ]
    pool = kept + unigrams
    pool.sort(key=lambda k: (-k.score, k.text))
    return pool[: config.top_k]


def detect_connectives(
    stream: TokenStream,
    bigrams: list[Keyphrase],
    config: ExtractionConfig,
) -> list[Keyphrase]:
    """Find stop words that statistically link the two terms of a bigram.

    For a bigram (u, w), backtrack to the raw stream and count
    co-occurrences of u followed by w within 2 positions. A stop word
    sitting between them in at least ``connective_min_count`` occurrences
    and at least ``merge_threshold`` of those co-occurrences yields an
    extra keyphrase "u s w"; the most frequent qualifying stop word wins.
    The original bigram is left untouched.
    """
    raw_sentences = [
        [(t.surface, t.is_stopword) for t in sentence] for sentence in stream.sentences
    ]
    variants: list[Keyphrase] = []
    for phrase in bigrams:
        if len(phrase.tokens) != 2 or phrase.connective is not None:
            continue
        u, w = phrase.tokens
        cooccurrences = 0
        middle_counts: Counter = Counter()
        for sentence in raw_sentences:
            for i, (surface, _) in enumerate(sentence):
                if surface != u:
                    continue
                for j in (i + 1, i + 2):
                    if j < len(sentence) and sentence[j][0] == w:
                        cooccurrences += 1
                        if j == i + 2:
                            mid_surface, mid_is_stop = sentence[i + 1]
                            if mid_is_stop:
                                middle_counts[mid_surface] += 1
                        break
        if not middle_counts or cooccurrences == 0:
            continue
        candidate, count = sorted(
            middle_counts.items(), key=lambda item: (-item[1], item[0])
        )[0]
        if count >= config.connective_min_count and (
            count / cooccurrences >= config.merge_threshold
        ):
            variants.append(
                Keyphrase(
                    doc_id=phrase.doc_id,
                    tokens=phrase.tokens,
                    score=phrase.score,
                    connective=candidate,
                    connective_position=1,
                )
            )
    return variants


def extract_document(
    doc: Document, stopwords: StopwordList, config: ExtractionConfig
) -> list[Keyphrase]:
    """End-to-end keyphrase extraction for one document.

    tokenize -> build_graph -> load_centrality -> rank_tokens ->
    extract_keyphrases -> detect_connectives, over title + abstract + body.
    """
    stream = tokenize(doc, stopwords, min_token_len=config.min_token_len)
    graph = build_graph(stream, config)
    if not graph.nodes:
        return []
    ranked = rank_tokens(load_centrality(graph))
    phrases = extract_keyphrases(stream, ranked, config)
    bigrams = [p for p in phrases if len(p.tokens) == 2 and p.connective is None]
    phrases = phrases + detect_connectives(stream, bigrams, config)
    phrases.sort(key=lambda k: (-k.score, k.text))
    return phrases


def keyphrases_to_record(doc_id: str, phrases: list[Keyphrase]) -> dict:
    """The JSON Lines dump record for one document's keyphrases."""
    return {
        "doc_id": doc_id,
        "keyphrases": [
            {
                "text": p.text,
                "connective_position": p.connective_position,
                "score": p.score,
            }
            for p in phrases
        ],
    }
