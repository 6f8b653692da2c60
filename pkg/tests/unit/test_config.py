"""Tests for config module."""

import pytest


def test_settings_defaults():
    from irqa.config import Settings

    s = Settings()
    assert s.env == "test"  # set by conftest
    assert s.bm25_k1 == 1.2
    assert s.bm25_b == 0.75
    assert s.default_depth == 20
    assert s.workers == 1
    assert s.strip_numbers is True
    assert s.regex_ignore_case is False


def test_env_override(monkeypatch):
    from irqa.config import get_settings

    monkeypatch.setenv("IRQA_WORKERS", "4")
    monkeypatch.setenv("IRQA_BM25_B", "0.5")
    s = get_settings()
    assert s.workers == 4
    assert s.bm25_b == 0.5


def test_settings_cached():
    from irqa.config import get_settings

    assert get_settings() is get_settings()


@pytest.mark.parametrize("field,value", [("workers", 0), ("bm25_b", 1.5), ("bm25_k1", 0.0), ("default_depth", 0)])
def test_rejects_out_of_range(field, value):
    from pydantic import ValidationError

    from irqa.config import Settings

    with pytest.raises(ValidationError):
        Settings(**{field: value})


def test_default_analyzer_config(tmp_path):
    from irqa.config import Settings
    from irqa.preprocessing.text_processor import default_analyzer_config

    stop = tmp_path / "stop.txt"
    stop.write_text("the\nOf\n\n", encoding="utf-8")
    cfg = default_analyzer_config(Settings(stopword_file=str(stop), strip_numbers=False))
    assert cfg.stopword_list == frozenset({"the", "of"})
    assert cfg.strip_numbers is False
