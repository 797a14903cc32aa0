import pytest

from uft.corpus import load_corpus


@pytest.fixture(scope="session")
def corpus_env():
    return load_corpus()
