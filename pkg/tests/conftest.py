"""irqa — Test fixtures."""

from __future__ import annotations

import os
from pathlib import Path

import pytest

# Force test environment
os.environ["IRQA_ENV"] = "test"
os.environ["IRQA_LOG_LEVEL"] = "WARNING"

FIXTURES = Path(__file__).parent / "fixtures"
MINI = FIXTURES / "mini"


@pytest.fixture(autouse=True)
def _fresh_state():
    """Drop cached settings and registered indexes between tests."""
    from irqa.config import get_settings
    from irqa.models.registry import IndexRegistry

    get_settings.cache_clear()
    IndexRegistry.reset()
    yield
    get_settings.cache_clear()
    IndexRegistry.reset()


@pytest.fixture
def mini_dir() -> Path:
    return MINI


@pytest.fixture
def porter_sample() -> list[tuple[str, str]]:
    pairs = []
    for line in (FIXTURES / "porter" / "sample.tsv").read_text(encoding="utf-8").splitlines():
        if line.strip() and not line.startswith("#"):
            word, stem = line.split("\t")
            pairs.append((word, stem))
    return pairs


@pytest.fixture
def analyzer_cfg():
    """Analyzer over the shipped stopword list."""
    from irqa.models.schemas import AnalyzerConfig
    from irqa.preprocessing.text_processor import load_stopwords

    return AnalyzerConfig(stopword_list=load_stopwords())


@pytest.fixture
def bare_cfg():
    """Analyzer without stopping, for hand-computed scores."""
    from irqa.models.schemas import AnalyzerConfig

    return AnalyzerConfig(stop=False)


@pytest.fixture
def make_index(analyzer_cfg):
    """Build an index from ``{unit_id: text}`` at passage or document level."""
    from irqa.core.retrieval.index import IndexUnit, build_index
    from irqa.models.enums import Granularity
    from irqa.models.schemas import IndexConfig

    def _make(texts: dict[str, str], granularity=Granularity.PASSAGE, cfg=None, parents=None):
        parents = parents or {}
        units = [IndexUnit(uid, parents.get(uid, uid.split("#")[0]), text) for uid, text in texts.items()]
        return build_index(units, IndexConfig(granularity=granularity, analyzer=cfg or analyzer_cfg))

    return _make


@pytest.fixture
def mini_documents(mini_dir):
    from irqa.preprocessing.corpus_reader import load_corpus

    return load_corpus([mini_dir / "corpus.sgml", mini_dir / "extra.jsonl"])


@pytest.fixture
def mini_questions(mini_dir):
    from irqa.preprocessing.dataset_reader import parse_questions

    return parse_questions((mini_dir / "questions.tsv").read_bytes())


@pytest.fixture
def mini_keys(mini_dir):
    from irqa.preprocessing.dataset_reader import parse_answer_keys

    return parse_answer_keys(
        (mini_dir / "patterns.txt").read_bytes(),
        (mini_dir / "judgments.txt").read_bytes(),
    )
