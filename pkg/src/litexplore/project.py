"""Neighbor-preserving 2D projection of document vectors.

The main path mirrors the standard manifold-projection recipe: an exact
cosine k-nearest-neighbor graph with locally calibrated exponential
weights, symmetrized, then a seeded attract/repel layout against the
low-dimensional kernel 1 / (1 + a d^(2b)). Initialization and the
deterministic fallback are the top two principal components, computed by
an iterated power method so the whole module stays self-contained.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import curve_fit

from .embed import EmbeddingModel

_NEGATIVES_PER_EDGE = 5
_GRAD_CLIP = 4.0


@dataclass(frozen=True)
class ProjectionConfig:
    n_neighbors: int = 15
    min_dist: float = 0.1
    epochs: int = 200
    seed: int = 1
    method: str = "neighbor_embedding"

    def __post_init__(self) -> None:
        if self.n_neighbors < 2:
            raise ValueError("n_neighbors must be >= 2")
        if self.min_dist <= 0:
            raise ValueError("min_dist must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be positive")
        if self.method not in ("neighbor_embedding", "pca"):
            raise ValueError(f"unknown projection method: {self.method!r}")


@dataclass
class NeighborGraph:
    """Symmetrized fuzzy k-nearest-neighbor graph over embedded documents."""

    doc_ids: list[str]
    vectors: np.ndarray  # rows aligned with doc_ids, zero vectors excluded
    knn_indices: np.ndarray  # (n, k)
    knn_dists: np.ndarray  # (n, k) cosine distances
    weights: dict[tuple[int, int], float] = field(default_factory=dict)


@dataclass
class Projection2D:
    coords: dict[str, tuple[float, float]]
    method: str
    params: dict

    def to_payload(self) -> dict:
        return {
            "method": self.method,
            "params": self.params,
            "points": [
                {"doc_id": doc_id, "x": x, "y": y}
                for doc_id, (x, y) in sorted(self.coords.items())
            ],
        }


def _embedded_rows(model: EmbeddingModel) -> tuple[list[str], np.ndarray]:
    """Doc ids and vectors for documents with a non-zero embedding."""
    vectors = model.doc_vectors.astype(np.float64)
    norms = np.linalg.norm(vectors, axis=1)
    keep = [row for row in range(len(vectors)) if norms[row] > 0.0]
    ids = [model.doc_ids[row] for row in keep]
    return ids, vectors[keep]


def smooth_weight_sigma(
    dists: np.ndarray, rho: float, target: float, n_iter: int = 64, tol: float = 1e-5
) -> float:
    """Binary-search the per-point bandwidth so the weight sum hits target.

    Solves sum_j exp(-max(0, d_j - rho) / sigma) = target. When every
    distance equals rho the sum is constant and sigma is reported as 1.
    """
    shifted = np.maximum(np.asarray(dists, dtype=np.float64) - rho, 0.0)
    if shifted.max() <= 0.0:
        return 1.0
    lo, hi, mid = 0.0, np.inf, 1.0
    for _ in range(n_iter):
        with np.errstate(over="ignore", under="ignore"):
            total = float(np.exp(-shifted / mid).sum())
        if abs(total - target) < tol:
            break
        if total > target:
            hi = mid
            mid = (lo + hi) / 2.0
        else:
            lo = mid
            mid = mid * 2.0 if hi == np.inf else (lo + hi) / 2.0
    return mid


def knn_graph(model: EmbeddingModel, n_neighbors: int) -> NeighborGraph:
    """Exact cosine kNN graph with calibrated, symmetrized fuzzy weights.

    Per point: w_j = exp(-max(0, d_j - rho) / sigma) with rho the nearest
    distance and sigma calibrated so the weights sum to log2(k); the
    directed graph is symmetrized by w_uv + w_vu - w_uv * w_vu.
    """
    doc_ids, vectors = _embedded_rows(model)
    n = len(doc_ids)
    if n < n_neighbors + 1:
        raise ValueError(
            f"need at least {n_neighbors + 1} embedded documents, have {n}"
        )
    normalized = vectors / np.linalg.norm(vectors, axis=1, keepdims=True)
    dist = np.clip(1.0 - normalized @ normalized.T, 0.0, 2.0)
    dist[dist < 1e-12] = 0.0  # identical vectors read as exactly 0
    np.fill_diagonal(dist, np.inf)

    knn_indices = np.empty((n, n_neighbors), dtype=np.int64)
    knn_dists = np.empty((n, n_neighbors), dtype=np.float64)
    for i in range(n):
        order = np.argsort(dist[i], kind="stable")[:n_neighbors]
        knn_indices[i] = order
        knn_dists[i] = dist[i, order]

    target = math.log2(n_neighbors)
    directed: dict[tuple[int, int], float] = {}
    for i in range(n):
        rho = float(knn_dists[i, 0])
        sigma = smooth_weight_sigma(knn_dists[i], rho, target)
        for j, d in zip(knn_indices[i], knn_dists[i]):
            directed[(i, int(j))] = float(np.exp(-max(0.0, d - rho) / sigma))

    weights: dict[tuple[int, int], float] = {}
    for (i, j), w in directed.items():
        key = (min(i, j), max(i, j))
        if key in weights:
            continue
        w_back = directed.get((j, i), 0.0)
        weights[key] = w + w_back - w * w_back
    return NeighborGraph(
        doc_ids=doc_ids,
        vectors=vectors,
        knn_indices=knn_indices,
        knn_dists=knn_dists,
        weights=weights,
    )


def fit_kernel_params(min_dist: float, spread: float = 1.0) -> tuple[float, float]:
    """Least-squares fit of (a, b) in 1/(1 + a d^(2b)) to the min_dist-shifted
    exponential, the published calibration procedure for the 2D kernel."""

    def kernel(x, a, b):
        return 1.0 / (1.0 + a * x ** (2.0 * b))

    xv = np.linspace(0.0, spread * 3.0, 300)
    yv = np.where(xv < min_dist, 1.0, np.exp(-(xv - min_dist) / spread))
    (a, b), _ = curve_fit(kernel, xv, yv)
    return float(a), float(b)


def _power_iteration(
    matrix: np.ndarray, start: np.ndarray, max_iter: int = 20000, tol: float = 1e-14
) -> tuple[np.ndarray, float]:
    """Dominant eigenvector/eigenvalue of a PSD matrix; zeros if rank-deficient."""
    v = start / np.linalg.norm(start)
    for _ in range(max_iter):
        w = matrix @ v
        norm = np.linalg.norm(w)
        if norm < 1e-30:
            return np.zeros_like(v), 0.0
        w /= norm
        if np.linalg.norm(w - v) < tol:
            v = w
            break
        v = w
    return v, float(v @ matrix @ v)


def _pca_top2(vectors: np.ndarray) -> np.ndarray:
    """Centered coordinates on the top two principal components.

    Components come from iterated power iteration with deflation; the
    sign convention makes the largest-magnitude loading positive.
    """
    centered = vectors - vectors.mean(axis=0)
    dim = centered.shape[1]
    cov = centered.T @ centered / max(len(centered), 1)
    start_rng = np.random.default_rng(192872)
    components = []
    for _ in range(2):
        vec, value = _power_iteration(cov, start_rng.random(dim) + 0.1)
        if value > 0.0 and np.linalg.norm(vec) > 0.0:
            if vec[int(np.argmax(np.abs(vec)))] < 0.0:
                vec = -vec
            cov = cov - value * np.outer(vec, vec)
        else:
            vec = np.zeros(dim)
        components.append(vec)
    return centered @ np.stack(components, axis=1)


def project_pca(model: EmbeddingModel) -> Projection2D:
    """Deterministic PCA projection (fallback and layout initializer)."""
    doc_ids, vectors = _embedded_rows(model)
    if len(doc_ids) < 2:
        raise ValueError("need at least 2 embedded documents")
    coords = _pca_top2(vectors)
    return Projection2D(
        coords={doc_id: (float(x), float(y)) for doc_id, (x, y) in zip(doc_ids, coords)},
        method="pca",
        params={},
    )


def layout(graph: NeighborGraph, config: ProjectionConfig) -> Projection2D:
    """Attract/repel optimization of the 2D embedding against graph weights.

    Attraction follows the kernel gradient along every graph edge (scaled
    by the edge weight); repulsion uses per-edge random negative samples.
    Gradient components are clipped to +-4 and the step size decays
    linearly to zero. Fixed seed implies identical output.
    """
    a, b = fit_kernel_params(config.min_dist)
    rng = np.random.default_rng(config.seed)
    coords = _pca_top2(graph.vectors)
    max_extent = np.abs(coords).max()
    if max_extent > 0:
        coords = coords * (10.0 / max_extent)
    else:
        coords = rng.standard_normal(coords.shape) * 1e-4

    n = len(graph.doc_ids)
    edges = sorted(graph.weights.items())
    heads = np.asarray([i for (i, _), _ in edges], dtype=np.int64)
    tails = np.asarray([j for (_, j), _ in edges], dtype=np.int64)
    edge_weights = np.asarray([w for _, w in edges], dtype=np.float64)

    for epoch in range(config.epochs):
        alpha = 1.0 - epoch / config.epochs
        diff = coords[heads] - coords[tails]
        d2 = (diff**2).sum(axis=1)
        positive = d2 > 0.0
        attract = np.zeros_like(d2)
        attract[positive] = (
            -2.0 * a * b * d2[positive] ** (b - 1.0) / (1.0 + a * d2[positive] ** b)
        )
        grad = np.clip(
            (edge_weights * attract)[:, None] * diff, -_GRAD_CLIP, _GRAD_CLIP
        )
        np.add.at(coords, heads, alpha * grad)
        np.add.at(coords, tails, -alpha * grad)

        negatives = rng.integers(0, n, size=(len(heads), _NEGATIVES_PER_EDGE))
        for column in range(_NEGATIVES_PER_EDGE):
            others = negatives[:, column]
            diff_n = coords[heads] - coords[others]
            d2_n = (diff_n**2).sum(axis=1)
            repel = 2.0 * b / ((0.001 + d2_n) * (1.0 + a * d2_n**b))
            grad_n = np.clip(repel[:, None] * diff_n, -_GRAD_CLIP, _GRAD_CLIP)
            grad_n[d2_n == 0.0] = _GRAD_CLIP
            grad_n[others == heads] = 0.0
            np.add.at(coords, heads, alpha * grad_n)

    coords = coords - coords.mean(axis=0)
    if not np.isfinite(coords).all():
        raise RuntimeError("layout produced non-finite coordinates")
    return Projection2D(
        coords={
            doc_id: (float(x), float(y))
            for doc_id, (x, y) in zip(graph.doc_ids, coords)
        },
        method="neighbor_embedding",
        params={
            "n_neighbors": config.n_neighbors,
            "min_dist": config.min_dist,
            "epochs": config.epochs,
            "seed": config.seed,
        },
    )


def project_documents(model: EmbeddingModel, config: ProjectionConfig) -> Projection2D:
    """Project all embedded documents per the configured method.

    Falls back to PCA when the corpus is too small for the configured
    neighborhood size, keeping the pipeline runnable on tiny fixtures.
    """
    if config.method == "pca":
        return project_pca(model)
    try:
        graph = knn_graph(model, config.n_neighbors)
    except ValueError:
        return project_pca(model)
    return layout(graph, config)
