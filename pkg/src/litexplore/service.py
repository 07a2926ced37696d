"""HTTP API over the index, embedding model, and projection snapshot.

Search follows the public syntax: /gp/api?keyword=...&keyword2=...&op=and
with the hit list hard-capped at 50. All scores are reported at 3-decimal
display precision. Requests never mutate state; a snapshot is immutable
once served, so identical requests produce byte-identical bodies.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.middleware.gzip import GZipMiddleware
from fastapi.responses import JSONResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles

from .embed import EmbeddingModel, nearest_neighbors
from .index import MAX_LIMIT, KeyphraseIndex, Query, autosuggest, search
from .project import Projection2D

MAX_SUGGESTIONS = 25
_NUMBERED_KEYWORD_RE = re.compile(r"keyword(\d+)")


@dataclass(frozen=True)
class ApiConfig:
    host: str = "127.0.0.1"
    port: int = 8080
    max_limit: int = MAX_LIMIT
    static_dir: str | None = None


@dataclass
class ServiceState:
    """Immutable snapshot the handlers read from."""

    index: KeyphraseIndex
    abstracts: dict[str, str] = field(default_factory=dict)
    model: EmbeddingModel | None = None
    projection: Projection2D | None = None


def _r3(value: float) -> float:
    return round(float(value), 3)


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": code, "message": message})


def _collect_terms(params) -> list[str]:
    """Gather keyword, keyword2..keywordN (and repeated keyword) in order."""
    terms = [value for value in params.getlist("keyword")]
    numbered = []
    for key in params.keys():
        match = _NUMBERED_KEYWORD_RE.fullmatch(key)
        if match and int(match.group(1)) >= 2:
            numbered.append((int(match.group(1)), key))
    for _, key in sorted(set(numbered)):
        terms.extend(params.getlist(key))
    return [term.strip().lower() for term in terms]


def create_app(state: ServiceState, static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="litexplore", docs_url=None, redoc_url=None)
    app.add_middleware(GZipMiddleware, minimum_size=1024)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["GET"], allow_headers=["*"]
    )

    def _hit_payload(hit) -> dict:
        meta = state.index.doc_meta.get(hit.doc_id)
        return {
            "doc_id": hit.doc_id,
            "score": _r3(hit.score),
            "title": hit.title,
            "doi": hit.doi,
            "journal": hit.journal,
            "year": hit.year,
            "keyphrases": [
                {"text": text, "score": _r3(score)}
                for text, score in (meta.keyphrases if meta else [])
            ],
        }

    @app.get("/gp/api")
    def api_search(request: Request):
        params = request.query_params
        if "keyword" not in params:
            return _error(400, "missing_keyword", "the keyword parameter is required")
        terms = _collect_terms(params)
        if any(not term for term in terms):
            return _error(400, "empty_keyword", "keyword parameters must be non-empty")
        op = params.get("op", "and").lower()
        if op not in ("and", "or"):
            return _error(400, "invalid_op", "op must be 'and' or 'or'")
        raw_limit = params.get("limit", str(MAX_LIMIT))
        try:
            limit = int(raw_limit)
        except ValueError:
            return _error(400, "invalid_limit", f"limit is not an integer: {raw_limit!r}")
        limit = max(1, min(limit, MAX_LIMIT))
        query = Query(terms=terms, operator=op, limit=limit)
        try:
            query.validate()
        except ValueError as exc:
            return _error(400, "invalid_query", str(exc))
        hits = search(state.index, query)
        return JSONResponse(
            {
                "query": {"terms": terms, "op": op, "limit": limit},
                "hits": [_hit_payload(hit) for hit in hits],
                "count": len(hits),
            }
        )

    @app.get("/gp/api/suggest")
    def api_suggest(request: Request):
        params = request.query_params
        if "q" not in params:
            return _error(400, "missing_query", "the q parameter is required")
        raw_k = params.get("k", "10")
        try:
            k = int(raw_k)
        except ValueError:
            return _error(400, "invalid_k", f"k is not an integer: {raw_k!r}")
        k = max(1, min(k, MAX_SUGGESTIONS))
        prefix = params["q"].strip().lower()
        return JSONResponse({"suggestions": autosuggest(state.index, prefix, k)})

    @app.get("/gp/api/doc/{doc_id}")
    def api_doc(doc_id: str):
        meta = state.index.doc_meta.get(doc_id)
        if meta is None:
            return _error(404, "not_found", f"unknown document: {doc_id}")
        abstract = state.abstracts.get(doc_id, "")
        neighbors = []
        if abstract.strip() and state.model is not None and doc_id in state.model.doc_index:
            for other_id, similarity in nearest_neighbors(state.model, doc_id, 10):
                other_meta = state.index.doc_meta.get(other_id)
                neighbors.append(
                    {
                        "doc_id": other_id,
                        "title": other_meta.title if other_meta else "",
                        "similarity": _r3(similarity),
                    }
                )
        coords = None
        if state.projection is not None and doc_id in state.projection.coords:
            x, y = state.projection.coords[doc_id]
            coords = {"x": x, "y": y}
        return JSONResponse(
            {
                "doc_id": doc_id,
                "title": meta.title,
                "abstract": abstract,
                "doi": meta.doi,
                "journal": meta.journal,
                "year": meta.year,
                "keyphrases": [
                    {"text": text, "score": _r3(score)}
                    for text, score in meta.keyphrases
                ],
                "neighbors": neighbors,
                "coords": coords,
            }
        )

    @app.get("/gp/api/projection")
    def api_projection():
        if state.projection is None:
            return _error(503, "pipeline_incomplete", "projection not built")
        projection = state.projection

        def stream():
            yield '{"method":%s,"points":[' % json.dumps(projection.method)
            first = True
            for doc_id, (x, y) in sorted(projection.coords.items()):
                meta = state.index.doc_meta.get(doc_id)
                point = json.dumps(
                    {
                        "doc_id": doc_id,
                        "x": x,
                        "y": y,
                        "title": meta.title if meta else "",
                    },
                    ensure_ascii=False,
                    separators=(",", ":"),
                )
                yield point if first else "," + point
                first = False
            yield "]}"

        return StreamingResponse(stream(), media_type="application/json")

    @app.get("/gp/api/health")
    def api_health():
        return JSONResponse({"status": "ok", "docs": len(state.index.doc_meta)})

    if static_dir:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    return app
