import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from synthcorpus import make_corpus, write_jsonl  # noqa: E402

from litexplore.corpus import load_stopwords  # noqa: E402


@pytest.fixture(scope="session")
def stopwords():
    return load_stopwords()


@pytest.fixture(scope="session")
def corpus60():
    return make_corpus(n_docs=60, seed=13)


@pytest.fixture(scope="session")
def corpus60_path(tmp_path_factory, corpus60):
    path = tmp_path_factory.mktemp("corpus") / "corpus60.jsonl"
    write_jsonl(corpus60, path)
    return path
