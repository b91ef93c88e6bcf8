from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_paths():
    return {
        "corpus": FIXTURES / "corpus.tsv",
        "topics": FIXTURES / "topics.tsv",
        "qrels": FIXTURES / "qrels.txt",
    }


@pytest.fixture(scope="session")
def fixture_index_path(fixture_paths, tmp_path_factory):
    """Index snapshot of the committed corpus, built once per session."""
    from mirelax import build_index, save_index
    from mirelax.index import load_corpus

    path = tmp_path_factory.mktemp("index") / "fixture-index.json"
    save_index(build_index(load_corpus(fixture_paths["corpus"])), path)
    return path
