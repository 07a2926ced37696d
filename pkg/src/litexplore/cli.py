"""Command-line driver for the pipeline and the HTTP service."""

from __future__ import annotations

import argparse
import logging
import socket
import sys
from pathlib import Path

from .pipeline import (
    STAGES,
    PipelineConfig,
    PipelineError,
    load_service_state,
    run_all,
    run_stage,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="litexplore",
        description="Keyphrase annotation, document embeddings, and ranked search "
        "over a literature corpus.",
    )
    parser.add_argument("--config", type=Path, help="TOML config file")
    parser.add_argument("--workdir", type=Path, default=Path("workdir"))
    parser.add_argument("--seed", type=int, help="override embed/project seeds")
    parser.add_argument("--workers", type=int, help="extraction worker processes")
    parser.add_argument("-v", "--verbose", action="store_true")

    sub = parser.add_subparsers(dest="command", required=True)
    for stage in STAGES:
        stage_parser = sub.add_parser(stage, help=f"run the {stage} stage")
        if stage == "ingest":
            stage_parser.add_argument("--input", type=Path, required=True)
            stage_parser.add_argument(
                "--format", choices=("jsonl", "cord19"), default=None
            )

    all_parser = sub.add_parser("all", help="run every stage in order")
    all_parser.add_argument("--input", type=Path, required=True)
    all_parser.add_argument("--format", choices=("jsonl", "cord19"), default=None)

    serve_parser = sub.add_parser("serve", help="serve the HTTP API")
    serve_parser.add_argument("--host", default=None)
    serve_parser.add_argument("--port", type=int, default=None)
    serve_parser.add_argument("--static-dir", default=None)
    return parser


def _load_config(args: argparse.Namespace) -> PipelineConfig:
    if args.config is not None:
        config = PipelineConfig.from_toml(args.config)
    else:
        config = PipelineConfig()
    if args.seed is not None:
        config = config.with_seed(args.seed)
    if args.workers is not None:
        config.workers = args.workers
    if getattr(args, "format", None):
        config.corpus_format = args.format
    return config


def _serve(config: PipelineConfig, args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    host = args.host or config.host
    port = args.port if args.port is not None else config.port
    static_dir = args.static_dir or config.static_dir

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((host, port))
    except OSError as exc:
        print(f"cannot bind {host}:{port}: {exc}", file=sys.stderr)
        return 1
    finally:
        probe.close()

    state = load_service_state(args.workdir)
    app = create_app(state, static_dir=static_dir)
    uvicorn.run(app, host=host, port=port, log_level="info")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = _load_config(args)
        if args.command == "serve":
            return _serve(config, args)
        if args.command == "all":
            results = run_all(config, args.workdir, args.input, workers=args.workers)
            for stage, status in results.items():
                print(f"{stage}: {status}")
            return 0
        status = run_stage(
            args.command,
            config,
            args.workdir,
            input_path=getattr(args, "input", None),
            workers=args.workers,
        )
        print(f"{args.command}: {status}")
        return 0
    except (PipelineError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
