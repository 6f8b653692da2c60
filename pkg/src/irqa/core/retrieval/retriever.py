"""irqa — Okapi BM25 scoring and top-n retrieval."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor

from irqa.core.retrieval.index import InvertedIndex
from irqa.models.enums import RetrievalStatus
from irqa.models.schemas import Question, QueryVariant, RankedEntry, RankedResult
from irqa.preprocessing.dataset_reader import formulate_query

logger = logging.getLogger(__name__)


def score(index: InvertedIndex, unit_id: str, query_terms: Iterable[str]) -> float:
    """BM25 of one unit; repeated query stems contribute once per occurrence."""
    k1, b = index.cfg.k1, index.cfg.b
    tf_map = index.unit_tf[unit_id]
    length = index.unit_lengths[unit_id]
    norm = k1 * (1.0 - b + b * length / index.avg_length) if index.avg_length else k1 * (1.0 - b)
    total = 0.0
    for stem in query_terms:
        tf = tf_map.get(stem, 0)
        if tf:
            total += index.idf(stem) * tf * (k1 + 1.0) / (tf + norm)
    return total


def rank(index: InvertedIndex, stems: Sequence[str], n: int) -> list[RankedEntry]:
    """Score units sharing a stem with the query; (-score, unit_id) order, zeros dropped."""
    candidates = {p.unit_id for stem in set(stems) for p in index.postings.get(stem, ())}
    scored = [(score(index, uid, stems), uid) for uid in candidates]
    scored = [(s, uid) for s, uid in scored if s > 0.0]
    scored.sort(key=lambda pair: (-pair[0], pair[1]))
    return [RankedEntry(unit_id=uid, score=s) for s, uid in scored[:n]]


def retrieve(index: InvertedIndex, query_text: str, n: int, question_id: str = "") -> RankedResult:
    if n < 1:
        raise ValueError("n must be >= 1")
    stems = index.analyzer.stems(query_text)
    if not stems:
        return RankedResult(question_id=question_id, query=query_text, status=RetrievalStatus.EMPTY_QUERY)
    return RankedResult(question_id=question_id, query=query_text, entries=rank(index, stems, n))


def retrieve_all(
    index: InvertedIndex,
    queries: Sequence[tuple[str, str]],
    n: int,
    workers: int = 1,
) -> list[RankedResult]:
    """Retrieve ``(question_id, query_text)`` pairs in parallel; output keeps input order."""
    with ThreadPoolExecutor(max_workers=max(workers, 1)) as pool:
        results = list(pool.map(lambda item: retrieve(index, item[1], n, question_id=item[0]), queries))
    empty = sum(1 for r in results if r.status is RetrievalStatus.EMPTY_QUERY)
    if empty:
        logger.warning("%d of %d queries analyzed to no terms", empty, len(results))
    return results


def retrieve_questions(
    index: InvertedIndex,
    questions: Sequence[Question],
    variant: QueryVariant,
    n: int,
    workers: int = 1,
) -> list[RankedResult]:
    queries = [(q.question_id, formulate_query(q, variant)) for q in questions]
    logger.info("Retrieving %d %s queries at n=%d", len(queries), variant.kind.value, n)
    return retrieve_all(index, queries, n, workers=workers)
