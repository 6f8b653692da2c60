"""irqa — Strict / lenient hit classification against answer keys."""

from __future__ import annotations

import threading

from irqa.models.enums import HitClass
from irqa.models.schemas import AnswerKey
from irqa.preprocessing.dataset_reader import AnswerMatcher

_matchers: dict[tuple[str, tuple[str, ...], bool], AnswerMatcher] = {}
_lock = threading.Lock()


def matcher_for(key: AnswerKey, ignore_case: bool = False) -> AnswerMatcher:
    """Compiled matcher for ``key``, shared across threads."""
    cache_key = (key.question_id, tuple(key.patterns), ignore_case)
    matcher = _matchers.get(cache_key)
    if matcher is None:
        matcher = AnswerMatcher(key, ignore_case=ignore_case)
        with _lock:
            _matchers.setdefault(cache_key, matcher)
    return matcher


def classify_hit(unit_text: str, unit_parent_doc_id: str, key: AnswerKey, ignore_case: bool = False) -> HitClass:
    """Lenient when a pattern matches; strict when the parent document is also judged supporting."""
    if not matcher_for(key, ignore_case).matches(unit_text):
        return HitClass.NONE
    if unit_parent_doc_id in key.supporting:
        return HitClass.STRICT
    return HitClass.LENIENT
