import sys
from pathlib import Path

import pytest

from subword_retrieval.corpus_io import Document
from subword_retrieval.tokenize import TokenizerConfig, WordPieceVocab

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def toy_vocab():
    return WordPieceVocab(("un", "##aff", "##able", "aff", "[UNK]"))


@pytest.fixture
def two_docs():
    return [Document("d1", "", "a b a"), Document("d2", "", "b c")]


@pytest.fixture
def ws_config():
    return TokenizerConfig("whitespace")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
