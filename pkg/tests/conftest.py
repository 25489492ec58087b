import unicodedata
from importlib import resources

import pytest

from bnqa import AnswerRanker, build_index, ingest, load_qa_pairs


def nfc(s: str) -> str:
    """Tests compare NFC-to-NFC: some Bengali codepoints that source files may
    carry precomposed (such as য়) decompose under NFC, so raw literals are not
    safe on the expectation side."""
    return unicodedata.normalize("NFC", s)


DATA = resources.files("bnqa").joinpath("data")


@pytest.fixture(scope="session")
def worked_sentences():
    return ingest(DATA / "worked_corpus.tsv", "tsv")


@pytest.fixture(scope="session")
def worked_index(worked_sentences):
    return build_index(worked_sentences)


@pytest.fixture(scope="session")
def worked_ranker(worked_sentences):
    return AnswerRanker().fit(worked_sentences)


@pytest.fixture(scope="session")
def mini_sentences():
    return ingest(DATA / "corpus_mini.tsv", "tsv")


@pytest.fixture(scope="session")
def mini_ranker(mini_sentences):
    return AnswerRanker().fit(mini_sentences)


@pytest.fixture(scope="session")
def mini_qa_pairs():
    return load_qa_pairs(DATA / "qa_mini.tsv")


WORKED_QUESTION = nfc("কোথায় চৈতন্যপ্রভাব সুস্পষ্ট?")
