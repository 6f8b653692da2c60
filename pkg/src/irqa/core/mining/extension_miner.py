"""irqa — Extension mining.

For a difficult question: take the answer-bearing passages of its
supporting documents, harvest candidate extension terms from them, and
measure each candidate as a query extension (Q+E and Q+T+E).
"""

from __future__ import annotations

import logging
import re
from collections.abc import Iterable, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor

from irqa.core.evaluation.hit_classifier import matcher_for
from irqa.core.evaluation.metrics import question_hits
from irqa.core.retrieval.index import InvertedIndex
from irqa.core.retrieval.retriever import retrieve
from irqa.exceptions import InvalidExtensionError
from irqa.models.enums import VariantKind
from irqa.models.schemas import (
    AnalyzerConfig,
    AnswerKey,
    Candidate,
    CandidateSet,
    Document,
    ExtensionBaseline,
    FilterCounts,
    HewRecord,
    Passage,
    Question,
    QueryVariant,
)
from irqa.preprocessing.dataset_reader import formulate_query
from irqa.preprocessing.text_processor import Analyzer, get_analyzer, normalize_token, tokenize, tokenize_with_spans

logger = logging.getLogger(__name__)

_DIGITS_RE = re.compile(r"^[0-9]+$")
EXTENDED_VARIANTS = (VariantKind.QE, VariantKind.QTE)


def collect_answer_passages(
    key: AnswerKey,
    corpus: Mapping[str, Document],
    ignore_case: bool = False,
) -> tuple[list[Passage], list[str]]:
    """Passages of supporting documents matching an answer pattern, plus unresolvable doc ids."""
    matcher = matcher_for(key, ignore_case)
    passages: list[Passage] = []
    missing: list[str] = []
    for doc_id in key.supporting_doc_ids:
        doc = corpus.get(doc_id)
        if doc is None:
            missing.append(doc_id)
            continue
        passages.extend(p for p in doc.passages if matcher.matches(p.text))
    if missing:
        logger.warning(
            "Question %s: %d supporting documents not in corpus: %s",
            key.question_id,
            len(missing),
            ", ".join(missing),
        )
    return passages, missing


def _all_stems(analyzer: Analyzer, text: str) -> set[str]:
    return {analyzer.stem(t) for t in tokenize(text) if normalize_token(t)}


def _answer_stems(analyzer: Analyzer, passages: Sequence[Passage], key: AnswerKey, ignore_case: bool) -> set[str]:
    matcher = matcher_for(key, ignore_case)
    stems: set[str] = set()
    for p in passages:
        spans = matcher.spans(p.text)
        if not spans:
            continue
        for token, start, end in tokenize_with_spans(p.text):
            if normalize_token(token) and any(start < s_end and s_start < end for s_start, s_end in spans):
                stems.add(analyzer.stem(token))
    return stems


def mine_candidates(
    passages: Sequence[Passage],
    question: Question,
    key: AnswerKey,
    cfg: AnalyzerConfig,
    titles: Iterable[str] = (),
    ignore_case: bool = False,
    common_stems: Iterable[str] = (),
    missing_doc_ids: Sequence[str] = (),
) -> CandidateSet:
    """Candidate extension terms in first-occurrence order.

    Drops question and target words, words inside answer match spans,
    stopwords, numbers (when stripping) and corpus-common stems. Whitelisted
    titles survive every filter except stopping.
    """
    analyzer = get_analyzer(cfg)
    whitelist = {normalize_token(t.lower()) for t in titles}
    common = set(common_stems)
    question_stems = _all_stems(analyzer, question.resolved_text)
    target_stems = _all_stems(analyzer, question.target)
    answer_stems = _answer_stems(analyzer, passages, key, ignore_case)

    counts = FilterCounts()
    seen: set[str] = set()
    candidates: list[Candidate] = []
    for passage in passages:
        for token in tokenize(passage.text):
            surface = normalize_token(token)
            if not surface:
                continue
            stem = analyzer.stem(token)
            if analyzer.is_stopword(token, stem):
                counts.stopwords += 1
                continue
            if stem in answer_stems:
                reason = "answer_words"
            elif stem in question_stems:
                reason = "question_words"
            elif stem in target_stems:
                reason = "target_words"
            elif cfg.strip_numbers and (_DIGITS_RE.match(surface) or _DIGITS_RE.match(stem)):
                reason = "numbers"
            elif stem in common:
                reason = "common_stems"
            else:
                reason = None
            if reason is not None and surface.lower() in whitelist:
                counts.retained_titles += 1
                logger.debug("Question %s: kept title %r despite %s filter", question.question_id, surface, reason)
                reason = None
            if reason is not None:
                setattr(counts, reason, getattr(counts, reason) + 1)
                continue
            if stem in seen:
                continue
            if not analyzer.round_trips(surface, stem):
                logger.debug("Question %s: %r does not re-analyze to %r, skipped", question.question_id, surface, stem)
                continue
            seen.add(stem)
            candidates.append(Candidate(stem=stem, surface=surface))

    return CandidateSet(
        question_id=question.question_id,
        candidates=candidates,
        source_passage_count=len(passages),
        filters_applied=counts,
        missing_doc_ids=list(missing_doc_ids),
    )


def common_corpus_stems(index: InvertedIndex, ratio: float) -> frozenset[str]:
    """Stems whose document frequency exceeds ``ratio`` of the index's units."""
    if index.unit_count == 0:
        return frozenset()
    return frozenset(stem for stem, plist in index.postings.items() if len(plist) / index.unit_count > ratio)


def check_extension(
    extension: str,
    question: Question,
    analyzer: Analyzer,
    titles: Iterable[str] = (),
    expected_stem: str | None = None,
) -> str:
    """Return the extension's single stem or raise InvalidExtensionError.

    With ``expected_stem`` the extension must also analyze to exactly that stem.
    """
    stems = analyzer.stems(extension)
    if len(stems) != 1:
        raise InvalidExtensionError(
            f"question {question.question_id}: extension {extension!r} analyzes to {len(stems)} terms"
        )
    stem = stems[0]
    if expected_stem is not None and stem != expected_stem:
        raise InvalidExtensionError(
            f"question {question.question_id}: extension {extension!r} analyzes to {stem!r}, not {expected_stem!r}"
        )
    whitelisted = normalize_token(extension.lower()) in {normalize_token(t.lower()) for t in titles}
    if not whitelisted and (
        stem in _all_stems(analyzer, question.resolved_text) or stem in _all_stems(analyzer, question.target)
    ):
        raise InvalidExtensionError(
            f"question {question.question_id}: extension {extension!r} repeats a question or target word"
        )
    return stem


def evaluate_extensions(
    index: InvertedIndex,
    question: Question,
    candidates: CandidateSet | Sequence[Candidate],
    n: int,
    key: AnswerKey,
    ignore_case: bool = False,
    titles: Iterable[str] = (),
    workers: int = 1,
) -> tuple[list[HewRecord], list[ExtensionBaseline]]:
    """Retrieve Q+E and Q+T+E for every candidate and record strict/lenient redundancy."""
    items = candidates.candidates if isinstance(candidates, CandidateSet) else list(candidates)
    analyzer = index.analyzer
    titles = tuple(titles)
    for cand in items:
        check_extension(cand.surface, question, analyzer, titles, expected_stem=cand.stem)

    def _run(variant: QueryVariant):
        result = retrieve(index, formulate_query(question, variant), n, question_id=question.question_id)
        return question_hits(result, key, index, n, ignore_case)

    baselines = []
    for kind in (VariantKind.Q, VariantKind.QT):
        hits = _run(QueryVariant(kind=kind))
        baselines.append(
            ExtensionBaseline(
                question_id=question.question_id,
                variant=kind,
                strict_redundancy=float(hits.strict_hits),
                lenient_redundancy=float(hits.lenient_hits),
            )
        )
    baseline_strict = baselines[0].strict_redundancy
    if baseline_strict > 0:
        logger.warning(
            "Question %s is not difficult at n=%d (baseline strict %s)", question.question_id, n, baseline_strict
        )

    jobs = [(cand, kind) for cand in items for kind in EXTENDED_VARIANTS]
    with ThreadPoolExecutor(max_workers=max(workers, 1)) as pool:
        outcomes = list(pool.map(lambda job: _run(QueryVariant(kind=job[1], extension=job[0].surface)), jobs))

    records = [
        HewRecord(
            question_id=question.question_id,
            term=cand.stem,
            surface=cand.surface,
            variant=kind,
            strict_redundancy=float(hits.strict_hits),
            lenient_redundancy=float(hits.lenient_hits),
            baseline_strict=baseline_strict,
        )
        for (cand, kind), hits in zip(jobs, outcomes)
    ]
    logger.info(
        "Question %s: %d candidates, %d retrievals, %d lifting records",
        question.question_id,
        len(items),
        len(records),
        sum(1 for r in records if r.lifts),
    )
    return records, baselines
