"""irqa — Run evaluation, coverage and redundancy.

Coverage is the fraction of evaluable questions with at least one hit in
the top n; redundancy is the mean number of hits per evaluable question.
Both exist in strict and lenient flavours.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from irqa.core.evaluation.hit_classifier import classify_hit
from irqa.core.retrieval.index import InvertedIndex
from irqa.exceptions import ConfigError, UndefinedMetricError
from irqa.models.enums import HitClass, MatchMode
from irqa.models.schemas import AnswerKey, QuestionHits, RankedResult, RunConfig, RunRecord

logger = logging.getLogger(__name__)


def default_run_id(config: RunConfig) -> str:
    parts = [config.question_set, config.granularity.value, config.variant.value, f"n{config.n}"]
    if config.rf is not None:
        parts.append(f"rf-r{config.rf.r}-k{config.rf.k}-{config.rf.level.value}")
    return ":".join(parts)


def _is_strict(mode: MatchMode | str | bool) -> bool:
    if isinstance(mode, bool):
        return mode
    return MatchMode(mode) is MatchMode.STRICT


def question_hits(
    result: RankedResult,
    key: AnswerKey,
    index: InvertedIndex,
    n: int,
    ignore_case: bool = False,
) -> QuestionHits:
    """Classify the top n entries of one ranked list."""
    strict_ranks: list[int] = []
    lenient_ranks: list[int] = []
    entries = result.entries[:n]
    for rank, entry in enumerate(entries, start=1):
        hit = classify_hit(index.unit_text[entry.unit_id], index.unit_parent[entry.unit_id], key, ignore_case)
        if hit is HitClass.NONE:
            continue
        lenient_ranks.append(rank)
        if hit is HitClass.STRICT:
            strict_ranks.append(rank)
    return QuestionHits(
        strict_hits=len(strict_ranks),
        lenient_hits=len(lenient_ranks),
        retrieved=len(entries),
        strict_ranks=strict_ranks,
        lenient_ranks=lenient_ranks,
    )


def evaluate_run(
    results: Sequence[RankedResult],
    keys: Mapping[str, AnswerKey],
    index: InvertedIndex,
    config: RunConfig,
    run_id: str | None = None,
    ignore_case: bool = False,
    workers: int = 1,
) -> RunRecord:
    """Count strict and lenient hits in the top ``config.n`` of every ranked list."""
    evaluable = [r for r in results if r.question_id in keys]
    unevaluable = sorted({r.question_id for r in results if r.question_id not in keys})
    if unevaluable:
        logger.warning("%d questions have no answer key and are excluded: %s", len(unevaluable), ", ".join(unevaluable))

    def _one(result: RankedResult) -> QuestionHits:
        return question_hits(result, keys[result.question_id], index, config.n, ignore_case)

    with ThreadPoolExecutor(max_workers=max(workers, 1)) as pool:
        hits = list(pool.map(_one, evaluable))
    per_question = {r.question_id: h for r, h in sorted(zip(evaluable, hits), key=lambda pair: pair[0].question_id)}
    return RunRecord(
        run_id=run_id or default_run_id(config),
        config=config,
        per_question=per_question,
        unevaluable=unevaluable,
    )


def _hit_counts(record: RunRecord, mode: MatchMode | str | bool) -> np.ndarray:
    if not record.per_question:
        raise UndefinedMetricError(f"run {record.run_id} has no evaluable questions")
    strict = _is_strict(mode)
    return np.fromiter((h.hits(strict) for h in record.per_question.values()), dtype=np.int64)


def coverage(record: RunRecord, mode: MatchMode | str | bool) -> float:
    counts = _hit_counts(record, mode)
    return int(np.count_nonzero(counts)) / counts.size


def redundancy(record: RunRecord, mode: MatchMode | str | bool) -> float:
    counts = _hit_counts(record, mode)
    return int(counts.sum()) / counts.size


def truncate(record: RunRecord, depth: int) -> RunRecord:
    """The same run re-counted at a smaller depth, from the stored hit ranks."""
    if not 1 <= depth <= record.config.n:
        raise ConfigError(f"depth {depth} outside 1..{record.config.n} for run {record.run_id}")
    if depth == record.config.n:
        return record
    per_question = {
        qid: QuestionHits(
            strict_hits=h.hits_within(depth, strict=True),
            lenient_hits=h.hits_within(depth, strict=False),
            retrieved=min(h.retrieved, depth),
            strict_ranks=[r for r in h.strict_ranks if r <= depth],
            lenient_ranks=[r for r in h.lenient_ranks if r <= depth],
        )
        for qid, h in record.per_question.items()
    }
    config = record.config.model_copy(update={"n": depth})
    return record.model_copy(update={"config": config, "per_question": per_question})


def coverage_curve(record: RunRecord, depths: Sequence[int]) -> list[dict[str, float]]:
    """Strict/lenient coverage and redundancy at each depth <= the run depth."""
    rows = []
    for depth in sorted(set(depths)):
        sub = truncate(record, depth)
        rows.append(
            {
                "n": depth,
                "coverage_strict": coverage(sub, MatchMode.STRICT),
                "coverage_lenient": coverage(sub, MatchMode.LENIENT),
                "redundancy_strict": redundancy(sub, MatchMode.STRICT),
                "redundancy_lenient": redundancy(sub, MatchMode.LENIENT),
            }
        )
    return rows
