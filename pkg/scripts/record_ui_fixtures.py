#!/usr/bin/env python3
"""Record API responses from a pipeline run over the demo corpus.

The recorded JSON files drive the webui contract and steering tests, so
the frontend is tested against real backend payloads without a live
server. meta.json describes the recorded steering session (which prefix
was typed, which terms were searched, which document was opened).

Usage: python scripts/record_ui_fixtures.py [--out webui/tests/fixtures]
"""

import argparse
import json
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "tests"))

from synthcorpus import make_corpus, write_jsonl  # noqa: E402

from litexplore.embed import TrainConfig  # noqa: E402
from litexplore.pipeline import PipelineConfig, load_service_state, run_all  # noqa: E402
from litexplore.project import ProjectionConfig  # noqa: E402
from litexplore.service import create_app  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--out", type=Path, default=REPO / "webui" / "tests" / "fixtures"
    )
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    def save(name: str, body) -> None:
        (args.out / name).write_text(
            json.dumps(body, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        print(f"recorded {name}")

    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        corpus_path = tmp / "corpus.jsonl"
        write_jsonl(make_corpus(60, seed=13), corpus_path)
        config = PipelineConfig(
            training=TrainConfig(dim=16, epochs=10, seed=1, min_count=2),
            projection=ProjectionConfig(n_neighbors=10, epochs=100, seed=1),
        )
        run_all(config, tmp / "w", corpus_path)
        client = TestClient(create_app(load_service_state(tmp / "w")))

        prefix = "sp"
        suggestions = client.get(f"/gp/api/suggest?q={prefix}&k=10").json()
        save("suggest_prefix.json", suggestions)
        term1 = suggestions["suggestions"][0]

        save("search_spike_or.json", client.get("/gp/api?keyword=spike&op=or&limit=50").json())
        search_1 = client.get(f"/gp/api?keyword={term1}&op=and&limit=50").json()
        save("search_1.json", search_1)

        term2 = "protein"
        search_2 = client.get(
            f"/gp/api?keyword={term1}&keyword2={term2}&op=and&limit=50"
        ).json()
        save("search_2.json", search_2)
        search_2_or = client.get(
            f"/gp/api?keyword={term1}&keyword2={term2}&op=or&limit=50"
        ).json()
        save("search_2_or.json", search_2_or)

        save("projection.json", client.get("/gp/api/projection").json())
        save("health.json", client.get("/gp/api/health").json())

        detail_doc = search_2_or["hits"][0]["doc_id"]
        detail = client.get(f"/gp/api/doc/{detail_doc}").json()
        save("doc_detail.json", detail)
        neighbor_doc = detail["neighbors"][0]["doc_id"]
        save("doc_neighbor.json", client.get(f"/gp/api/doc/{neighbor_doc}").json())

        save(
            "meta.json",
            {
                "prefix": prefix,
                "term1": term1,
                "term2": term2,
                "detail_doc": detail_doc,
                "neighbor_doc": neighbor_doc,
            },
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
