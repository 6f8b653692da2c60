"""irqa — Difficult-question identification."""

from __future__ import annotations

import logging
from collections.abc import Sequence

from irqa.exceptions import ConfigError, DatasetMismatchError
from irqa.models.enums import DifficultyMode
from irqa.models.schemas import DifficultSet, RunRecord

logger = logging.getLogger(__name__)


def identify_difficult(
    runs: Sequence[RunRecord],
    n: int,
    threshold: float = 0.0,
    mode: DifficultyMode | str = DifficultyMode.BOTH,
) -> DifficultSet:
    """Questions whose hits at depth n stay <= threshold in every consulted run.

    ``mode="both"`` requires strict and lenient hits under the threshold (so
    lenient decides); ``mode="strict"`` looks at strict hits only.
    """
    mode = DifficultyMode(mode)
    if not runs:
        raise ConfigError("identify_difficult needs at least one run")
    reference = runs[0].question_ids
    for run in runs[1:]:
        if run.question_ids != reference:
            diff = sorted(reference ^ run.question_ids)
            raise DatasetMismatchError(
                f"run {run.run_id} covers a different question set than {runs[0].run_id}: {', '.join(diff[:10])}"
            )
    shallow = [r.run_id for r in runs if r.config.n < n]
    if shallow:
        raise ConfigError(f"runs evaluated below depth {n}: {', '.join(shallow)}")

    strict = mode is DifficultyMode.STRICT
    evaluable = set.intersection(*(set(r.per_question) for r in runs))
    difficult = sorted(
        qid
        for qid in evaluable
        if max(r.per_question[qid].hits_within(n, strict=strict) for r in runs) <= threshold
    )
    question_sets = sorted({r.config.question_set for r in runs})
    logger.info(
        "%d of %d questions difficult at n=%d over %d runs (mode=%s, threshold=%s)",
        len(difficult),
        len(evaluable),
        n,
        len(runs),
        mode.value,
        threshold,
    )
    return DifficultSet(
        question_ids=difficult,
        provenance=sorted(r.run_id for r in runs),
        n=n,
        mode=mode,
        threshold=threshold,
        question_set="+".join(question_sets),
    )
