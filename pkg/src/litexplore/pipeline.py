"""Stage-file pipeline: ingest -> extract -> embed -> project -> index.

Each stage writes one artifact into the workdir and records (content
hash, config hash, upstream hashes) in manifest.json. A stage re-runs
only when its config or an upstream artifact changed, so interrupted
pipelines resume where they left off and unchanged re-runs are no-ops.
"""

from __future__ import annotations

import hashlib
import json
import logging
import multiprocessing
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import corpus as corpus_mod
from . import embed as embed_mod
from . import index as index_mod
from . import keygraph
from . import project as project_mod

logger = logging.getLogger(__name__)

STAGES = ("ingest", "extract", "embed", "project", "index")
STAGE_DEPS: dict[str, tuple[str, ...]] = {
    "ingest": (),
    "extract": ("ingest",),
    "embed": ("ingest",),
    "project": ("embed",),
    "index": ("ingest", "extract"),
}
ARTIFACTS = {
    "ingest": "corpus.jsonl",
    "extract": "keyphrases.jsonl",
    "embed": "model.bin",
    "project": "projection.json",
    "index": "index.json",
}


class PipelineError(RuntimeError):
    pass


@dataclass
class PipelineConfig:
    corpus_format: str = "jsonl"
    min_token_len: int = 2
    extraction: keygraph.ExtractionConfig = field(
        default_factory=keygraph.ExtractionConfig
    )
    training: embed_mod.TrainConfig = field(default_factory=embed_mod.TrainConfig)
    projection: project_mod.ProjectionConfig = field(
        default_factory=project_mod.ProjectionConfig
    )
    host: str = "127.0.0.1"
    port: int = 8080
    static_dir: str | None = None
    workers: int = 1

    @classmethod
    def from_toml(cls, path: Path | str) -> "PipelineConfig":
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
        cfg = cls()
        section = raw.get("corpus", {})
        cfg.corpus_format = section.get("format", cfg.corpus_format)
        cfg.min_token_len = section.get("min_token_length", cfg.min_token_len)
        if "extract" in raw:
            cfg.extraction = keygraph.ExtractionConfig(
                min_token_len=cfg.min_token_len, **raw["extract"]
            )
        else:
            cfg.extraction = keygraph.ExtractionConfig(min_token_len=cfg.min_token_len)
        if "embed" in raw:
            cfg.training = embed_mod.TrainConfig(**raw["embed"])
        if "project" in raw:
            cfg.projection = project_mod.ProjectionConfig(**raw["project"])
        service = raw.get("service", {})
        cfg.host = service.get("host", cfg.host)
        cfg.port = service.get("port", cfg.port)
        cfg.static_dir = service.get("static_dir") or None
        cfg.workers = raw.get("pipeline", {}).get("workers", cfg.workers)
        return cfg

    def with_seed(self, seed: int) -> "PipelineConfig":
        cfg = PipelineConfig(**{**self.__dict__})
        cfg.training = embed_mod.TrainConfig(**{**asdict(self.training), "seed": seed})
        cfg.projection = project_mod.ProjectionConfig(
            **{**asdict(self.projection), "seed": seed}
        )
        return cfg

    def stage_config(self, stage: str) -> dict:
        """The config slice that participates in a stage's identity hash."""
        if stage == "ingest":
            return {"format": self.corpus_format}
        if stage == "extract":
            return asdict(self.extraction)
        if stage == "embed":
            return asdict(self.training)
        if stage == "project":
            return asdict(self.projection)
        if stage == "index":
            return {}
        raise PipelineError(f"unknown stage: {stage}")


def _hash_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _hash_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _hash_config(config: dict) -> str:
    return _hash_bytes(json.dumps(config, sort_keys=True).encode("utf-8"))


class Manifest:
    """Per-workdir record of stage outputs and their identity hashes."""

    def __init__(self, workdir: Path) -> None:
        self.path = workdir / "manifest.json"
        self.stages: dict[str, dict] = {}
        if self.path.exists():
            self.stages = json.loads(self.path.read_text(encoding="utf-8")).get(
                "stages", {}
            )

    def save(self) -> None:
        self.path.write_text(
            json.dumps({"stages": self.stages}, indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )

    def record(self, stage: str, path: Path, config_hash: str, upstream: dict) -> None:
        self.stages[stage] = {
            "path": path.name,
            "content_hash": _hash_file(path),
            "config_hash": config_hash,
            "upstream": upstream,
            "timestamp": time.time(),
        }
        self.save()

    def is_current(
        self, stage: str, artifact: Path, config_hash: str, upstream: dict
    ) -> bool:
        entry = self.stages.get(stage)
        if entry is None or not artifact.exists():
            return False
        return (
            entry.get("config_hash") == config_hash
            and entry.get("upstream") == upstream
            and entry.get("content_hash") == _hash_file(artifact)
        )

    def invalidate(self, stage: str) -> None:
        self.stages.pop(stage, None)
        self.save()


def artifact_path(workdir: Path, stage: str) -> Path:
    return workdir / ARTIFACTS[stage]


def _require_upstream(manifest: Manifest, workdir: Path, stage: str) -> dict:
    upstream = {}
    for dep in STAGE_DEPS[stage]:
        entry = manifest.stages.get(dep)
        dep_artifact = artifact_path(workdir, dep)
        if entry is None or not dep_artifact.exists():
            raise PipelineError(f"missing stage: {dep}")
        upstream[dep] = entry["content_hash"]
    return upstream


def _load_documents(workdir: Path) -> list[corpus_mod.Document]:
    return list(corpus_mod.load_corpus(artifact_path(workdir, "ingest"), "jsonl"))


def _run_ingest(config: PipelineConfig, workdir: Path, input_path: Path) -> None:
    out_path = artifact_path(workdir, "ingest")
    loader = corpus_mod.load_corpus(input_path, config.corpus_format)
    seen: set[str] = set()
    duplicates = 0
    count = 0
    with open(out_path, "w", encoding="utf-8") as fh:
        for doc in loader:
            if doc.doc_id in seen:
                duplicates += 1
                logger.warning("duplicate doc_id skipped: %s", doc.doc_id)
                continue
            seen.add(doc.doc_id)
            fh.write(
                json.dumps(
                    corpus_mod.document_to_record(doc),
                    sort_keys=True,
                    ensure_ascii=False,
                )
                + "\n"
            )
            count += 1
    logger.info(
        "ingest: %d documents, %d malformed skipped, %d duplicates skipped",
        count,
        loader.skipped,
        duplicates,
    )
    if count == 0:
        raise PipelineError("ingest produced an empty corpus")


def _extract_one(args: tuple) -> dict:
    record, stopword_paths, config = args
    stopwords = corpus_mod.load_stopwords(*stopword_paths)
    doc = corpus_mod.Document(**record)
    phrases = keygraph.extract_document(doc, stopwords, config)
    return keygraph.keyphrases_to_record(doc.doc_id, phrases)


def _run_extract(config: PipelineConfig, workdir: Path, workers: int) -> None:
    documents = _load_documents(workdir)
    out_path = artifact_path(workdir, "extract")
    stopword_paths = (None, None)  # packaged defaults
    tasks = [
        (corpus_mod.document_to_record(doc), stopword_paths, config.extraction)
        for doc in documents
    ]
    if workers > 1:
        with multiprocessing.Pool(workers) as pool:
            records = list(pool.imap(_extract_one, tasks, chunksize=8))
    else:
        stopwords = corpus_mod.load_stopwords()
        records = [
            keygraph.keyphrases_to_record(
                doc.doc_id, keygraph.extract_document(doc, stopwords, config.extraction)
            )
            for doc in documents
        ]
    with open(out_path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, sort_keys=True, ensure_ascii=False) + "\n")


def _run_embed(config: PipelineConfig, workdir: Path) -> None:
    documents = _load_documents(workdir)
    vocab = embed_mod.build_vocab(documents, min_count=config.training.min_count)
    model = embed_mod.train(documents, vocab, config.training)
    embed_mod.save_model(model, artifact_path(workdir, "embed"))


def _run_project(config: PipelineConfig, workdir: Path) -> None:
    model = embed_mod.load_model(artifact_path(workdir, "embed"))
    projection = project_mod.project_documents(model, config.projection)
    artifact_path(workdir, "project").write_text(
        json.dumps(projection.to_payload(), sort_keys=True, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )


def _run_index(config: PipelineConfig, workdir: Path) -> None:
    documents = _load_documents(workdir)
    records = []
    with open(artifact_path(workdir, "extract"), encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                records.append(json.loads(line))
    built = index_mod.build_index(records, documents)
    index_mod.save_index(built, artifact_path(workdir, "index"))


def run_stage(
    stage: str,
    config: PipelineConfig,
    workdir: Path | str,
    input_path: Path | str | None = None,
    workers: int | None = None,
) -> str:
    """Run one stage if needed. Returns "ran" or "skipped"."""
    if stage not in STAGES:
        raise PipelineError(f"unknown stage: {stage}")
    workdir = Path(workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    manifest = Manifest(workdir)
    upstream = _require_upstream(manifest, workdir, stage)

    stage_config = config.stage_config(stage)
    if stage == "ingest":
        if input_path is None:
            raise PipelineError("ingest requires an input path")
        stage_config = {**stage_config, "input": str(input_path)}
    if stage == "extract":
        # worker count must not affect the artifact, so it is not hashed
        workers = workers if workers is not None else config.workers
    config_hash = _hash_config(stage_config)

    artifact = artifact_path(workdir, stage)
    if manifest.is_current(stage, artifact, config_hash, upstream):
        logger.info("%s: up to date, skipping", stage)
        return "skipped"

    if stage == "ingest":
        _run_ingest(config, workdir, Path(input_path))
    elif stage == "extract":
        _run_extract(config, workdir, workers or 1)
    elif stage == "embed":
        _run_embed(config, workdir)
    elif stage == "project":
        _run_project(config, workdir)
    else:
        _run_index(config, workdir)

    manifest.record(stage, artifact, config_hash, upstream)
    return "ran"


def run_all(
    config: PipelineConfig,
    workdir: Path | str,
    input_path: Path | str,
    workers: int | None = None,
) -> dict[str, str]:
    results = {}
    for stage in STAGES:
        results[stage] = run_stage(
            stage,
            config,
            workdir,
            input_path=input_path if stage == "ingest" else None,
            workers=workers,
        )
    return results


def load_service_state(workdir: Path | str):
    """Build a ServiceState from whatever artifacts exist in the workdir."""
    from .service import ServiceState

    workdir = Path(workdir)
    index_file = artifact_path(workdir, "index")
    if not index_file.exists():
        raise PipelineError("missing stage: index")
    built = index_mod.load_index(index_file)

    abstracts: dict[str, str] = {}
    corpus_file = artifact_path(workdir, "ingest")
    if corpus_file.exists():
        for doc in corpus_mod.load_corpus(corpus_file, "jsonl"):
            abstracts[doc.doc_id] = doc.abstract

    model = None
    model_file = artifact_path(workdir, "embed")
    if model_file.exists():
        model = embed_mod.load_model(model_file)

    projection = None
    projection_file = artifact_path(workdir, "project")
    if projection_file.exists():
        payload = json.loads(projection_file.read_text(encoding="utf-8"))
        projection = project_mod.Projection2D(
            coords={
                point["doc_id"]: (point["x"], point["y"])
                for point in payload["points"]
            },
            method=payload["method"],
            params=payload.get("params", {}),
        )
    return ServiceState(
        index=built, abstracts=abstracts, model=model, projection=projection
    )
