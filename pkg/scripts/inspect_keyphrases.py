#!/usr/bin/env python3
"""Extract and print keyphrases for ad-hoc text, for eyeballing the ranker.

Usage:
    python scripts/inspect_keyphrases.py paper.txt
    echo "Spike protein binds the receptor..." | python scripts/inspect_keyphrases.py -
"""

import argparse
import sys

from litexplore.corpus import Document, load_stopwords
from litexplore.keygraph import ExtractionConfig, extract_document


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("path", help="text file, or - for stdin")
    parser.add_argument("--top-k", type=int, default=20)
    parser.add_argument("--window", type=int, default=1)
    args = parser.parse_args()

    if args.path == "-":
        text = sys.stdin.read()
    else:
        with open(args.path, encoding="utf-8") as fh:
            text = fh.read()
    if not text.strip():
        print("no text", file=sys.stderr)
        return 1

    doc = Document(doc_id="adhoc", body=text)
    config = ExtractionConfig(top_k=args.top_k, window=args.window)
    for phrase in extract_document(doc, load_stopwords(), config):
        print(f"{phrase.score:.4f}  {phrase.text}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
