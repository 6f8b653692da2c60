"""irqa — QA dataset: question sets, answer keys and query formulation."""

from __future__ import annotations

import json
import logging
import re
from collections import defaultdict
from functools import lru_cache
from typing import IO

from pydantic import ValidationError

from irqa import SCHEMA_VERSION
from irqa.exceptions import DuplicateIdError, ParseError, PatternError
from irqa.models.enums import QuestionFormat, VariantKind
from irqa.models.schemas import AnswerKey, Question, QueryVariant

logger = logging.getLogger(__name__)

_TSV_FIELDS = ("question_id", "series_id", "target", "raw_text", "resolved_text")
_BACKREF_RE = re.compile(r"(?<!\\)(?:\\\\)*\\[1-9]|\(\?P=")


def _lines(stream: bytes | str | IO) -> list[tuple[int, str]]:
    data = stream if isinstance(stream, (bytes, str)) else stream.read()
    text = data.decode("utf-8", errors="replace") if isinstance(data, bytes) else data
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.strip() and not line.lstrip().startswith("#"):
            out.append((lineno, line.rstrip("\r\n")))
    return out


# --- questions ---


def _question_from_tsv(lineno: int, line: str) -> Question:
    cols = [c.strip() for c in line.split("\t")]
    if len(cols) < 4 or not cols[0] or not cols[3]:
        missing = _TSV_FIELDS[len(cols)] if len(cols) < 4 else ("question_id" if not cols[0] else "raw_text")
        raise ParseError(f"missing field {missing}", line=lineno)
    record = dict(zip(_TSV_FIELDS, cols))
    return Question.model_validate(record)


def _question_from_json(lineno: int, line: str) -> Question:
    try:
        return Question.model_validate_json(line)
    except ValidationError as exc:
        fields = ", ".join(str(e["loc"][0]) for e in exc.errors() if e.get("loc")) or "record"
        raise ParseError(f"missing or invalid field {fields}", line=lineno) from exc


def parse_questions(stream: bytes | str | IO, fmt: QuestionFormat | None = None) -> list[Question]:
    """Questions from TSV (qid, series, target, raw[, resolved]) or JSONL."""
    lines = _lines(stream)
    if fmt is None:
        fmt = QuestionFormat.JSONL if lines and lines[0][1].lstrip().startswith("{") else QuestionFormat.TSV
    reader = _question_from_json if fmt is QuestionFormat.JSONL else _question_from_tsv
    questions: list[Question] = []
    seen: set[str] = set()
    dups: list[str] = []
    for lineno, line in lines:
        q = reader(lineno, line)
        if q.question_id in seen:
            dups.append(q.question_id)
        seen.add(q.question_id)
        questions.append(q)
    if dups:
        raise DuplicateIdError("question id", sorted(set(dups)))
    return questions


def dump_questions(
    questions: list[Question],
    fmt: QuestionFormat = QuestionFormat.TSV,
    fingerprint: str | None = None,
) -> str:
    """Serialize questions in a format ``parse_questions`` reads back.

    With ``fingerprint`` the output opens with a ``# fingerprint=...`` comment line.
    """
    if fmt is QuestionFormat.JSONL:
        rows = [json.dumps(q.model_dump(mode="json"), sort_keys=True) for q in questions]
    else:
        rows = [
            "\t".join(_squash(getattr(q, f)) for f in _TSV_FIELDS)
            for q in questions
        ]
    if fingerprint is not None:
        rows.insert(0, f"# fingerprint={fingerprint} schema_version={SCHEMA_VERSION}")
    return "".join(r + "\n" for r in rows)


def _squash(value: str) -> str:
    return " ".join(value.split())


# --- answer keys ---


@lru_cache(maxsize=4096)
def _compile(pattern: str, ignore_case: bool) -> re.Pattern[str]:
    return re.compile(pattern, re.IGNORECASE if ignore_case else 0)


def compile_pattern(question_id: str, pattern: str, ignore_case: bool = False) -> re.Pattern[str]:
    """Compile an answer pattern; backreferences are outside the supported dialect."""
    if _BACKREF_RE.search(pattern):
        raise PatternError(question_id, pattern, "backreferences are not supported")
    try:
        return _compile(pattern, ignore_case)
    except re.error as exc:
        raise PatternError(question_id, pattern, str(exc)) from exc


class AnswerMatcher:
    """Compiled patterns of one AnswerKey."""

    def __init__(self, key: AnswerKey, ignore_case: bool = False) -> None:
        self.key = key
        self.patterns = [compile_pattern(key.question_id, p, ignore_case) for p in key.patterns]

    def matches(self, text: str) -> bool:
        return any(p.search(text) for p in self.patterns)

    def spans(self, text: str) -> list[tuple[int, int]]:
        """Character spans of every non-empty match of every pattern."""
        found = {m.span() for p in self.patterns for m in p.finditer(text) if m.end() > m.start()}
        return sorted(found)


def parse_answer_keys(
    patterns_stream: bytes | str | IO,
    judgments_stream: bytes | str | IO | None = None,
    ignore_case: bool = False,
) -> dict[str, AnswerKey]:
    """Merge ``qid regex`` and ``qid docid`` lines into one AnswerKey per question."""
    patterns: dict[str, list[str]] = defaultdict(list)
    for lineno, line in _lines(patterns_stream):
        parts = line.strip().split(maxsplit=1)
        if len(parts) < 2:
            raise ParseError("expected 'qid regex'", line=lineno)
        qid, pattern = parts[0], parts[1].strip()
        compile_pattern(qid, pattern, ignore_case)
        if pattern not in patterns[qid]:
            patterns[qid].append(pattern)

    supporting: dict[str, set[str]] = defaultdict(set)
    if judgments_stream is not None:
        for lineno, line in _lines(judgments_stream):
            parts = line.split()
            if len(parts) < 2:
                raise ParseError("expected 'qid docid'", line=lineno)
            supporting[parts[0]].add(parts[1])

    orphans = sorted(set(supporting) - set(patterns))
    if orphans:
        logger.warning("Judgments without patterns ignored for %d questions: %s", len(orphans), ", ".join(orphans))

    return {
        qid: AnswerKey(question_id=qid, patterns=pats, supporting_doc_ids=sorted(supporting.get(qid, ())))
        for qid, pats in sorted(patterns.items())
    }


# --- query formulation ---


def formulate_query(q: Question, v: QueryVariant) -> str:
    """Plain concatenation; analysis happens at retrieval time."""
    parts = [q.resolved_text]
    if v.kind in (VariantKind.QT, VariantKind.QTE):
        parts.append(q.target)
    if v.kind.needs_extension and v.extension:
        parts.append(v.extension)
    return " ".join(parts)
