#!/usr/bin/env python3
"""Generate the synthetic two-topic demo corpus as JSON Lines.

Usage: python scripts/make_demo_corpus.py [out.jsonl] [--docs N] [--seed S]

The result feeds the CLI end to end:
    litexplore --workdir demo all --input demo_corpus.jsonl
    litexplore --workdir demo serve --port 8080
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from synthcorpus import make_corpus, write_jsonl  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("output", nargs="?", default="demo_corpus.jsonl", type=Path)
    parser.add_argument("--docs", type=int, default=60)
    parser.add_argument("--seed", type=int, default=13)
    args = parser.parse_args()
    docs = make_corpus(n_docs=args.docs, seed=args.seed)
    write_jsonl(docs, args.output)
    print(f"wrote {len(docs)} documents to {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
