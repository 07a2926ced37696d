"""litexplore: keyphrase annotation, embedding maps, and ranked search
for literature corpora."""

__version__ = "0.1.0"

from .corpus import Document, StopwordList, Token, TokenStream, load_corpus, load_stopwords, tokenize
from .keygraph import (
    CentralityScores,
    ExtractionConfig,
    Keyphrase,
    TokenGraph,
    build_graph,
    extract_document,
    extract_keyphrases,
    load_centrality,
    rank_tokens,
)
from .embed import EmbeddingModel, TrainConfig, Vocabulary, build_vocab, nearest_neighbors, train
from .project import Projection2D, ProjectionConfig, knn_graph, layout, project_pca
from .index import (
    KeyphraseIndex,
    Query,
    SearchHit,
    autosuggest,
    build_index,
    journal_histogram,
    search,
)

__all__ = [name for name in dir() if not name.startswith("_")]
