"""irqa — Helpful extension word (HEW) aggregation."""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Sequence

import numpy as np

from irqa.exceptions import UndefinedMetricError
from irqa.models.schemas import HewRecord, HewSummary


def hew_sets(records: Sequence[HewRecord]) -> dict[str, set[str]]:
    """HEW stems per question: terms lifting strict redundancy from zero in some variant."""
    out: dict[str, set[str]] = defaultdict(set)
    for rec in records:
        if rec.lifts:
            out[rec.question_id].add(rec.term)
    return dict(out)


def term_redundancy(records: Sequence[HewRecord]) -> dict[tuple[str, str], float]:
    """Strict redundancy of each (question, term) averaged over the variants tested."""
    grouped: dict[tuple[str, str], list[float]] = defaultdict(list)
    for rec in records:
        grouped[(rec.question_id, rec.term)].append(rec.strict_redundancy)
    return {k: float(np.mean(v)) for k, v in sorted(grouped.items())}


def hew_stats(records: Sequence[HewRecord], difficult_used: int) -> HewSummary:
    if difficult_used <= 0:
        raise UndefinedMetricError("no difficult questions were used for extension mining")
    helpful = hew_sets(records)
    hew_keys = sorted((qid, term) for qid, terms in helpful.items() for term in terms)
    per_term = term_redundancy(records)
    benefited = len(helpful)
    hew_count = len(hew_keys)
    increase = float(np.mean([per_term[k] for k in hew_keys])) if hew_keys else 0.0
    return HewSummary(
        difficult_used=difficult_used,
        variations_tested=len(records),
        questions_benefited=benefited,
        benefited_fraction=benefited / difficult_used,
        hew_count_strict=hew_count,
        mean_hew_per_question=hew_count / difficult_used,
        mean_redundancy_increase=increase,
    )
