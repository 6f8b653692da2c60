"""irqa — Blind relevance feedback by raw term frequency.

Terms are counted over the top r initially retrieved texts (IRT) for the
unextended question, question/target words and stopwords removed, and the
k most frequent appended to the query. The coverage re-evaluation always
runs on the baseline index; the RF level only picks which index feeds
term selection.
"""

from __future__ import annotations

import logging
from collections import Counter, defaultdict
from collections.abc import Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from irqa.core.evaluation.metrics import default_run_id, evaluate_run
from irqa.core.evaluation.reports import Table, rf_table
from irqa.core.retrieval.index import InvertedIndex
from irqa.core.retrieval.retriever import retrieve, retrieve_all, retrieve_questions
from irqa.exceptions import ConfigError, DatasetMismatchError, IncompatibleIndexError, UndefinedMetricError
from irqa.models.enums import Granularity, VariantKind
from irqa.models.schemas import (
    AnswerKey,
    Question,
    QueryVariant,
    RfConfig,
    RfIntersection,
    RfSelection,
    RfTerm,
    RunConfig,
    RunRecord,
)
from irqa.preprocessing.text_processor import Analyzer, normalize_token, tokenize

logger = logging.getLogger(__name__)


def _question_stems(index: InvertedIndex, question: Question) -> set[str]:
    analyzer = index.analyzer
    text = f"{question.resolved_text} {question.target}"
    return {analyzer.stem(t) for t in tokenize(text) if normalize_token(t)}


def _query_surface(analyzer: Analyzer, stem: str, seen: Counter[str]) -> str | None:
    """Most frequent surface of ``stem`` that analyzes back to it alone; ties by text."""
    for surface, _ in sorted(seen.items(), key=lambda s: (-s[1], s[0])):
        if analyzer.round_trips(surface, stem):
            return surface
    return None


def select_rf_terms(index: InvertedIndex, question: Question, cfg: RfConfig) -> RfSelection:
    """Top k stems by summed TF over the top r units for Q; ties by stem."""
    if index.granularity is not cfg.level:
        raise IncompatibleIndexError(
            f"feedback at {cfg.level.value} level needs a {cfg.level.value} index, got {index.granularity.value}"
        )
    result = retrieve(index, question.resolved_text, cfg.r, question_id=question.question_id)
    irt = [e.unit_id for e in result.entries]
    if not irt:
        return RfSelection(question_id=question.question_id, config=cfg, empty_retrieval=True)

    excluded = _question_stems(index, question)
    analyzer = index.analyzer
    tf: Counter[str] = Counter()
    surfaces: dict[str, Counter[str]] = defaultdict(Counter)
    for uid in irt:
        for term in index.unit_terms[uid]:
            if term.stem in excluded or analyzer.is_stopword(term.surface, term.stem):
                continue
            tf[term.stem] += 1
            surfaces[term.stem][term.surface] += 1

    terms: list[RfTerm] = []
    for stem, count in sorted(tf.items(), key=lambda item: (-item[1], item[0])):
        if len(terms) == cfg.k:
            break
        surface = _query_surface(analyzer, stem, surfaces[stem])
        if surface is None:
            logger.warning("Question %s: no surface of %r re-analyzes to it, skipped", question.question_id, stem)
            continue
        terms.append(RfTerm(stem=stem, surface=surface, tf=count))
    return RfSelection(question_id=question.question_id, config=cfg, terms=terms, irt_unit_ids=irt)


def apply_rf(question: Question, terms: Sequence[RfTerm | str]) -> str:
    words = [t.surface if isinstance(t, RfTerm) else t for t in terms]
    if not words:
        return question.resolved_text
    return question.resolved_text + " " + " ".join(words)


@dataclass
class RfExperiment:
    baseline: RunRecord
    runs: list[RunRecord]
    selections: dict[str, list[RfSelection]] = field(default_factory=dict)
    table: Table | None = None

    @property
    def records(self) -> list[RunRecord]:
        return [*self.runs, self.baseline]


def rf_coverage_experiment(
    index: InvertedIndex,
    questions: Sequence[Question],
    keys: Mapping[str, AnswerKey],
    cfg: RfConfig | Sequence[RfConfig],
    ranks: Sequence[int],
    feedback_indexes: Mapping[Granularity, InvertedIndex] | None = None,
    question_set: str = "default",
    ignore_case: bool = False,
    workers: int = 1,
) -> RfExperiment:
    """Baseline vs. RF strict coverage at each rank; rows ranks, columns r x level plus baseline."""
    if not ranks:
        raise ConfigError("rf experiment needs at least one rank")
    if list(ranks) != sorted(ranks):
        raise ConfigError(f"ranks must be sorted ascending: {list(ranks)}")
    cfgs = [cfg] if isinstance(cfg, RfConfig) else list(cfg)
    sources = dict(feedback_indexes or {})
    sources.setdefault(index.granularity, index)
    n = max(ranks)
    fp = index.cfg.analyzer.fingerprint

    base_cfg = RunConfig(granularity=index.granularity, analyzer_fingerprint=fp, n=n, question_set=question_set)
    base_results = retrieve_questions(index, questions, QueryVariant(kind=VariantKind.Q), n, workers=workers)
    baseline = evaluate_run(
        base_results,
        keys,
        index,
        base_cfg,
        run_id=default_run_id(base_cfg) + ":rf-baseline",
        ignore_case=ignore_case,
        workers=workers,
    )

    runs: list[RunRecord] = []
    selections: dict[str, list[RfSelection]] = {}
    for rf in cfgs:
        source = sources.get(rf.level)
        if source is None:
            raise IncompatibleIndexError(f"no {rf.level.value} index available for feedback setting {rf.label}")
        with ThreadPoolExecutor(max_workers=max(workers, 1)) as pool:
            chosen = list(pool.map(lambda q: select_rf_terms(source, q, rf), questions))
        skipped = sum(1 for s in chosen if s.empty_retrieval)
        if skipped:
            logger.warning("%s: %d questions had empty initial retrieval and keep their baseline", rf.label, skipped)
        queries = [(q.question_id, apply_rf(q, s.terms)) for q, s in zip(questions, chosen)]
        results = retrieve_all(index, queries, n, workers=workers)
        run_cfg = base_cfg.model_copy(update={"rf": rf})
        runs.append(evaluate_run(results, keys, index, run_cfg, ignore_case=ignore_case, workers=workers))
        selections[rf.label] = chosen

    experiment = RfExperiment(baseline=baseline, runs=runs, selections=selections)
    experiment.table = rf_table(experiment.records, ranks)
    return experiment


def irt_stems(selection: RfSelection, index: InvertedIndex) -> list[set[str]]:
    """Stem sets of a selection's initially retrieved texts."""
    return [{t.stem for t in index.unit_terms[uid]} for uid in selection.irt_unit_ids]


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def rf_hew_intersection(
    hew_sets: Mapping[str, set[str]],
    irt_texts: Mapping[str, Sequence[set[str]]],
    rf_terms: Mapping[str, Sequence[str]],
) -> RfIntersection:
    """Overlap of HEWs with IRTs and with RF-selected stems, pooled and per question."""
    qids = set(hew_sets)
    if qids != set(irt_texts) or qids != set(rf_terms):
        raise DatasetMismatchError("HEW sets, IRT texts and RF terms must cover the same questions")
    total_hews = sum(len(h) for h in hew_sets.values())
    if total_hews == 0:
        raise UndefinedMetricError("no helpful extension words to intersect with")

    found = irt_total = irt_hit = rf_total = rf_hit = 0
    macro: dict[str, list[float]] = defaultdict(list)
    for qid in sorted(qids):
        hews = set(hew_sets[qid])
        texts = [set(t) for t in irt_texts[qid]]
        terms = list(dict.fromkeys(rf_terms[qid]))
        pool = set().union(*texts) if texts else set()
        q_found = len(hews & pool)
        q_irt_hit = sum(1 for t in texts if t & hews)
        q_rf_hit = sum(1 for s in terms if s in hews)
        found += q_found
        irt_total += len(texts)
        irt_hit += q_irt_hit
        rf_total += len(terms)
        rf_hit += q_rf_hit
        if hews:
            macro["hew_found_in_irt"].append(q_found / len(hews))
        if texts:
            macro["irt_containing_hew"].append(q_irt_hit / len(texts))
        if terms:
            macro["rf_words_in_hew"].append(q_rf_hit / len(terms))

    def _mean(name: str) -> float:
        values = macro.get(name, [])
        return sum(values) / len(values) if values else 0.0

    return RfIntersection(
        hew_found_in_irt=found / total_hews,
        irt_containing_hew=_ratio(irt_hit, irt_total),
        rf_words_in_hew=_ratio(rf_hit, rf_total),
        hew_found_in_irt_macro=_mean("hew_found_in_irt"),
        irt_containing_hew_macro=_mean("irt_containing_hew"),
        rf_words_in_hew_macro=_mean("rf_words_in_hew"),
        questions=len(qids),
    )
