"""Paragraph-vector (PV-DBOW) abstract embeddings with negative sampling.

Each document vector is trained to predict the words of its abstract
directly: maximize log sigma(v_doc . u_word) for observed words against
k noise words drawn from the unigram distribution raised to 3/4. Training
is plain seeded SGD with a fixed iteration order, so a given (corpus,
config, seed) always produces bitwise-identical vectors.

Stop words are retained here; the stop-word filter is a keyphrase-side
concern and distributional training benefits from the full stream.
"""

from __future__ import annotations

import json
import struct
from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import Document, normalize_sentences

_MODEL_MAGIC = b"LXDV"
_MODEL_VERSION = 1


class TrainingDivergedError(RuntimeError):
    """Raised when training produces non-finite values (lr too high)."""


@dataclass(frozen=True)
class TrainConfig:
    dim: int = 256
    epochs: int = 20
    negative_samples: int = 5
    initial_lr: float = 0.025
    final_lr: float = 1e-4
    seed: int = 1
    subsample_threshold: float = 1e-3
    min_count: int = 3

    def __post_init__(self) -> None:
        if min(self.dim, self.epochs + 1, self.negative_samples) < 1:
            raise ValueError("dim, epochs, negative_samples must be positive")
        if self.initial_lr <= 0 or self.final_lr <= 0:
            raise ValueError("learning rates must be positive")
        if self.final_lr >= self.initial_lr:
            raise ValueError("final_lr must be below initial_lr")


@dataclass
class Vocabulary:
    """Word <-> dense id maps over abstract tokens with frequency >= min_count.

    Ids are assigned by (frequency desc, word asc), so they are a pure
    function of the corpus.
    """

    word_to_id: dict[str, int]
    id_to_word: list[str]
    frequencies: list[int]
    min_count: int = 3

    def __len__(self) -> int:
        return len(self.id_to_word)


@dataclass
class EmbeddingModel:
    doc_vectors: np.ndarray  # (D, dim) float32
    word_vectors: np.ndarray  # (V, dim) float32, negative-sampling outputs
    doc_index: dict[str, int]
    config: TrainConfig
    doc_ids: list[str] = field(default_factory=list)

    def vector(self, doc_id: str) -> np.ndarray:
        return self.doc_vectors[self.doc_index[doc_id]]


def abstract_tokens(doc: Document) -> list[str]:
    """Flat normalized token surfaces of a document's abstract."""
    return [t for sent in normalize_sentences(doc.abstract) for t in sent]


def build_vocab(corpus: Iterable[Document], min_count: int = 3) -> Vocabulary:
    counts: Counter = Counter()
    any_abstract = False
    for doc in corpus:
        tokens = abstract_tokens(doc)
        if tokens:
            any_abstract = True
        counts.update(tokens)
    if not any_abstract:
        raise ValueError("nothing to embed: corpus has no non-empty abstracts")
    retained = sorted(
        (word for word, c in counts.items() if c >= min_count),
        key=lambda w: (-counts[w], w),
    )
    return Vocabulary(
        word_to_id={w: i for i, w in enumerate(retained)},
        id_to_word=retained,
        frequencies=[counts[w] for w in retained],
        min_count=min_count,
    )


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-np.clip(x, -60.0, 60.0)))


def pair_loss(doc_vec: np.ndarray, pos_vec: np.ndarray, neg_vecs: np.ndarray) -> float:
    """Negative-sampling loss for one (document, word) observation."""
    pos_logit = float(doc_vec @ pos_vec)
    neg_logits = neg_vecs @ doc_vec
    return float(np.logaddexp(0.0, -pos_logit) + np.logaddexp(0.0, neg_logits).sum())


def pair_gradients(
    doc_vec: np.ndarray, pos_vec: np.ndarray, neg_vecs: np.ndarray
) -> tuple[float, np.ndarray, np.ndarray, np.ndarray]:
    """Loss and analytic gradients w.r.t. (doc_vec, pos_vec, neg_vecs)."""
    pos_logit = doc_vec @ pos_vec
    neg_logits = neg_vecs @ doc_vec
    g_pos = _sigmoid(pos_logit) - 1.0
    g_neg = _sigmoid(neg_logits)
    grad_doc = g_pos * pos_vec + g_neg @ neg_vecs
    grad_pos = g_pos * doc_vec
    grad_negs = g_neg[:, None] * doc_vec[None, :]
    loss = float(np.logaddexp(0.0, -pos_logit) + np.logaddexp(0.0, neg_logits).sum())
    return loss, grad_doc, grad_pos, grad_negs


def _doc_token_ids(corpus: Sequence[Document], vocab: Vocabulary) -> list[np.ndarray]:
    ids = []
    for doc in corpus:
        in_vocab = [
            vocab.word_to_id[t] for t in abstract_tokens(doc) if t in vocab.word_to_id
        ]
        ids.append(np.asarray(in_vocab, dtype=np.int64))
    return ids


def train(
    corpus: Sequence[Document], vocab: Vocabulary, config: TrainConfig
) -> EmbeddingModel:
    """Train PV-DBOW document vectors over the corpus abstracts.

    Documents with empty abstracts get the zero vector and are excluded
    from training. Negatives equal to the target word are dropped from
    that draw (never resampled, keeping the random stream fixed-length).
    """
    docs = list(corpus)
    doc_ids = [doc.doc_id for doc in docs]
    if len(set(doc_ids)) != len(doc_ids):
        raise ValueError("duplicate doc_id in corpus")
    rng = np.random.default_rng(config.seed)
    dim, n_docs, n_words = config.dim, len(docs), len(vocab)

    doc_vectors = ((rng.random((n_docs, dim)) - 0.5) / dim).astype(np.float32)
    word_vectors = ((rng.random((max(n_words, 1), dim)) - 0.5) / dim).astype(np.float32)
    if n_words == 0:
        word_vectors = word_vectors[:0]

    token_ids = _doc_token_ids(docs, vocab)
    for row, doc in enumerate(docs):
        if not doc.abstract.strip():
            doc_vectors[row] = 0.0

    trainable = [
        row for row, doc in enumerate(docs) if doc.abstract.strip() and len(token_ids[row])
    ]
    total_positions = config.epochs * sum(len(token_ids[row]) for row in trainable)
    model = EmbeddingModel(
        doc_vectors=doc_vectors,
        word_vectors=word_vectors,
        doc_index={doc_id: row for row, doc_id in enumerate(doc_ids)},
        config=config,
        doc_ids=doc_ids,
    )
    if not trainable or n_words == 0 or config.epochs == 0:
        return model

    freqs = np.asarray(vocab.frequencies, dtype=np.float64)
    noise = freqs**0.75
    noise_cdf = np.cumsum(noise / noise.sum())
    total_tokens = freqs.sum()
    keep_prob = np.ones(n_words)
    if config.subsample_threshold > 0:
        ratio = config.subsample_threshold / (freqs / total_tokens)
        keep_prob = np.minimum(1.0, np.sqrt(ratio) + ratio)

    lr_span = config.final_lr - config.initial_lr
    k = config.negative_samples
    processed = 0
    for epoch in range(config.epochs):
        for row in trainable:
            v = doc_vectors[row]
            for word_id in token_ids[row]:
                lr = config.initial_lr + lr_span * (processed / total_positions)
                processed += 1
                if keep_prob[word_id] < 1.0 and rng.random() >= keep_prob[word_id]:
                    continue
                negs = np.searchsorted(noise_cdf, rng.random(k), side="right")
                negs = np.minimum(negs, n_words - 1)
                negs = negs[negs != word_id]
                loss, grad_doc, grad_pos, grad_negs = pair_gradients(
                    v, word_vectors[word_id], word_vectors[negs]
                )
                word_vectors[word_id] -= lr * grad_pos
                np.subtract.at(word_vectors, negs, lr * grad_negs)
                v -= (lr * grad_doc).astype(np.float32)
        if not np.isfinite(doc_vectors).all():
            raise TrainingDivergedError(
                f"non-finite document vectors after epoch {epoch} "
                f"(initial_lr={config.initial_lr}); lower the learning rate"
            )
    return model


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(a @ b) / (na * nb)


def nearest_neighbors(
    model: EmbeddingModel, doc_id: str, k: int
) -> list[tuple[str, float]]:
    """Top-k other documents by cosine similarity, descending.

    Ties break by doc_id ascending. Zero-vector documents (empty
    abstracts) are excluded as candidates and score 0 against everything
    when used as the query.
    """
    if doc_id not in model.doc_index:
        raise KeyError(f"unknown document: {doc_id!r}")
    if k <= 0:
        return []
    query_row = model.doc_index[doc_id]
    query = model.doc_vectors[query_row].astype(np.float64)
    norms = np.linalg.norm(model.doc_vectors.astype(np.float64), axis=1)
    query_norm = norms[query_row]

    sims: list[tuple[str, float]] = []
    for other_id, row in model.doc_index.items():
        if row == query_row or norms[row] == 0.0:
            continue
        if query_norm == 0.0:
            sims.append((other_id, 0.0))
        else:
            value = float(model.doc_vectors[row].astype(np.float64) @ query)
            sims.append((other_id, value / (query_norm * norms[row])))
    sims.sort(key=lambda item: (-item[1], item[0]))
    return sims[:k]


def save_model(model: EmbeddingModel, path: Path | str) -> None:
    """Write the binary model file plus a JSON sidecar with the TrainConfig.

    Layout (little-endian): magic "LXDV", u32 version, u32 D, u32 V,
    u32 dim, then D doc-id entries (u32 byte length + UTF-8 bytes), then
    the D x dim doc matrix and the V x dim word matrix as row-major f32.
    """
    path = Path(path)
    n_docs, dim = model.doc_vectors.shape
    n_words = model.word_vectors.shape[0]
    with open(path, "wb") as fh:
        fh.write(_MODEL_MAGIC)
        fh.write(struct.pack("<IIII", _MODEL_VERSION, n_docs, n_words, dim))
        for doc_id in model.doc_ids:
            raw = doc_id.encode("utf-8")
            fh.write(struct.pack("<I", len(raw)))
            fh.write(raw)
        fh.write(np.ascontiguousarray(model.doc_vectors, dtype="<f4").tobytes())
        fh.write(np.ascontiguousarray(model.word_vectors, dtype="<f4").tobytes())
    sidecar = path.with_name(path.name + ".json")
    sidecar.write_text(
        json.dumps(asdict(model.config), sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )


def load_model(path: Path | str) -> EmbeddingModel:
    path = Path(path)
    with open(path, "rb") as fh:
        if fh.read(4) != _MODEL_MAGIC:
            raise ValueError(f"not a model file: {path}")
        version, n_docs, n_words, dim = struct.unpack("<IIII", fh.read(16))
        if version != _MODEL_VERSION:
            raise ValueError(f"unsupported model version {version}")
        doc_ids = []
        for _ in range(n_docs):
            (length,) = struct.unpack("<I", fh.read(4))
            doc_ids.append(fh.read(length).decode("utf-8"))
        doc_vectors = np.frombuffer(
            fh.read(n_docs * dim * 4), dtype="<f4"
        ).reshape(n_docs, dim)
        word_vectors = np.frombuffer(
            fh.read(n_words * dim * 4), dtype="<f4"
        ).reshape(n_words, dim)
    sidecar = path.with_name(path.name + ".json")
    config = TrainConfig(**json.loads(sidecar.read_text(encoding="utf-8")))
    return EmbeddingModel(
        doc_vectors=doc_vectors.copy(),
        word_vectors=word_vectors.copy(),
        doc_index={doc_id: row for row, doc_id in enumerate(doc_ids)},
        config=config,
        doc_ids=doc_ids,
    )
